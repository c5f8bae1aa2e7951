#include <gtest/gtest.h>
#include <zlib.h>

#include <cstring>
#include <filesystem>

#include "semsearch/error.hpp"
#include "semsearch/model.hpp"
#include "semsearch/random.hpp"
#include "test_support.hpp"

namespace semsearch {
namespace {

using testing::make_dataset;
using testing::make_fv;

Dataset mixed_dataset() {
  Rng rng(44);
  Dataset d = make_dataset({"a", "b", "c"}, 12, 3);
  for (std::size_t i = 0; i < 45; ++i) {
    const CategoryIndex c = i % 3;
    std::vector<std::pair<TermId, double>> counts = {{static_cast<TermId>(c * 4 + rng.below(4)), 1.0}};
    if (rng.below(2) == 0) counts.push_back({static_cast<TermId>(rng.below(12)), 2.0});
    std::sort(counts.begin(), counts.end());
    counts.erase(std::unique(counts.begin(), counts.end(),
                             [](const auto& x, const auto& y) { return x.first == y.first; }),
                 counts.end());
    d.examples.push_back(
        {make_fv(counts, {static_cast<double>(c) + rng.unit(), rng.unit(), 5.0}), c});
  }
  return d;
}

ClassifierOptions fast_options() {
  ClassifierOptions o;
  o.mlp.epochs = 40;
  return o;
}

std::uint32_t read_u32(const std::string& bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(bytes[at + i]);
  return v;
}

void write_u32(std::string& bytes, std::size_t at, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) bytes[at + i] = static_cast<char>((v >> (8 * i)) & 0xFF);
}

std::uint32_t zlib_crc(std::string_view payload) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(payload.data()), static_cast<uInt>(payload.size())));
}

class ModelRoundTrip : public ::testing::TestWithParam<ClassifierKind> {};

TEST_P(ModelRoundTrip, BitIdenticalPredictions) {
  const Dataset d = mixed_dataset();
  const Model m = train_model(GetParam(), d, fast_options());
  EXPECT_EQ(kind_of(m), GetParam());
  EXPECT_EQ(categories_of(m), d.categories);
  EXPECT_EQ(schema_of(m).num_terms, 12u);
  EXPECT_EQ(schema_of(m).dense_size, 3u);

  const std::string bytes = serialize_model(m);
  const Model back = deserialize_model(bytes, "memory");
  EXPECT_EQ(serialize_model(back), bytes);
  for (const auto& ex : d.examples) {
    const auto a = predict_proba(m, ex.features);
    const auto b = predict_proba(back, ex.features);
    ASSERT_EQ(a.size(), b.size());
    EXPECT_EQ(std::memcmp(a.probabilities.data(), b.probabilities.data(), a.size() * sizeof(double)), 0);
    EXPECT_EQ(predict(m, ex.features), a.argmax());
  }
}

TEST_P(ModelRoundTrip, FileRoundTrip) {
  const Dataset d = mixed_dataset();
  const Model m = train_model(GetParam(), d, fast_options());
  const auto dir = std::filesystem::temp_directory_path() / "semsearch_model_test";
  std::filesystem::create_directories(dir);
  const auto file = dir / (std::string(to_string(GetParam())) + ".model");
  save_model(m, file);
  const Model back = load_model(file);
  for (const auto& ex : d.examples) EXPECT_EQ(predict_proba(m, ex.features), predict_proba(back, ex.features));
  std::filesystem::remove_all(dir);
}

TEST_P(ModelRoundTrip, HeaderCarriesVersionAndChecksum) {
  const std::string bytes = serialize_model(train_model(GetParam(), mixed_dataset(), fast_options()));
  EXPECT_EQ(read_u32(bytes, 0), kModelFormatVersion);
  EXPECT_EQ(read_u32(bytes, 4), zlib_crc(std::string_view(bytes).substr(8)));
}

TEST_P(ModelRoundTrip, CorruptionIsDetected) {
  const std::string bytes = serialize_model(train_model(GetParam(), mixed_dataset(), fast_options()));
  std::string flipped = bytes;
  flipped[bytes.size() / 2] = static_cast<char>(flipped[bytes.size() / 2] ^ 0x5A);
  try {
    deserialize_model(flipped, "flipped.model");
    FAIL() << "corruption not detected";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_NE(std::string(e.what()).find("flipped.model"), std::string::npos);
  }
  EXPECT_THROW(deserialize_model(std::string_view(bytes).substr(0, bytes.size() - 3), "cut"), Error);
  EXPECT_THROW(deserialize_model(std::string_view(bytes).substr(0, 5), "cut"), Error);
}

TEST_P(ModelRoundTrip, VersionMismatchNamesBothVersions) {
  std::string bytes = serialize_model(train_model(GetParam(), mixed_dataset(), fast_options()));
  write_u32(bytes, 0, kModelFormatVersion + 1);
  try {
    deserialize_model(bytes, "future.model");
    FAIL() << "version bump accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kVersion);
    const std::string what = e.what();
    EXPECT_NE(what.find(std::to_string(kModelFormatVersion + 1)), std::string::npos);
    EXPECT_NE(what.find(std::to_string(kModelFormatVersion)), std::string::npos);
  }
}

TEST_P(ModelRoundTrip, ForeignFeatureSchemaRejected) {
  std::string bytes = serialize_model(train_model(GetParam(), mixed_dataset(), fast_options()));
  const std::string schema(kFeatureSchemaVersion);
  const auto at = bytes.find(schema);
  ASSERT_NE(at, std::string::npos);
  bytes[at + schema.size() - 1] = '9';
  write_u32(bytes, 4, zlib_crc(std::string_view(bytes).substr(8)));
  try {
    deserialize_model(bytes, "old.model");
    FAIL() << "foreign schema accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchema);
  }
}

INSTANTIATE_TEST_SUITE_P(AllKinds, ModelRoundTrip, ::testing::ValuesIn(kAllClassifierKinds),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(ClassifierKindNames, RoundTrip) {
  for (ClassifierKind k : kAllClassifierKinds) EXPECT_EQ(parse_classifier_kind(to_string(k)), k);
  EXPECT_FALSE(parse_classifier_kind("ensemble"));
  EXPECT_EQ(to_string(ClassifierKind::kNaiveBayes), "nb");
}

}  // namespace
}  // namespace semsearch
