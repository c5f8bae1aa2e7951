#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "semsearch/error.hpp"
#include "semsearch/model.hpp"
#include "semsearch/persistence.hpp"
#include "test_support.hpp"

namespace semsearch {
namespace {

namespace fs = std::filesystem;

const Engine& trained() {
  static const Engine engine = [] {
    Engine e = testing::build_qa_engine();
    e.train();
    return e;
  }();
  return engine;
}

class PersistenceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("semsearch_state_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    save_state(trained(), dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  template <typename Fn>
  Error load_error(Fn&& mutate) {
    mutate();
    try {
      load_state(dir_);
    } catch (const Error& e) {
      return e;
    }
    ADD_FAILURE() << "load_state accepted a damaged state";
    return Error(ErrorCode::kInvariant, "");
  }

  nlohmann::ordered_json manifest() const {
    std::ifstream in(dir_ / "manifest.json");
    return nlohmann::ordered_json::parse(in);
  }
  void write_manifest(const nlohmann::ordered_json& m) const {
    std::ofstream(dir_ / "manifest.json") << m.dump(2);
  }

  fs::path dir_;
};

TEST_F(PersistenceTest, ManifestDescribesTheState) {
  const auto m = manifest();
  EXPECT_EQ(m.at("format_version"), kStateFormatVersion);
  EXPECT_EQ(m.at("feature_schema"), std::string(kFeatureSchemaVersion));
  EXPECT_EQ(m.at("model_format_version"), kModelFormatVersion);
  EXPECT_EQ(m.at("sentences"), trained().records().size());
  EXPECT_EQ(m.at("terms"), trained().vocabulary().size());
  EXPECT_EQ(m.at("nodes").size(), trained().models().size());
  EXPECT_TRUE(fs::exists(dir_ / "models" / "_root" / "svm.model"));
  EXPECT_TRUE(fs::exists(dir_ / "models" / "sports" / "nb.model"));
  EXPECT_EQ(model_dir_for(""), fs::path("_root"));
  EXPECT_EQ(model_dir_for("art & culture"), fs::path("art & culture"));
}

TEST_F(PersistenceTest, RoundTripAnswersIdentically) {
  const Engine restored = load_state(dir_);
  const Engine& original = trained();
  EXPECT_TRUE(std::ranges::equal(restored.vocabulary().terms(), original.vocabulary().terms()));
  EXPECT_TRUE(std::ranges::equal(restored.vocabulary().document_frequencies(),
                                 original.vocabulary().document_frequencies()));
  EXPECT_EQ(restored.index(), original.index());
  EXPECT_EQ(restored.corpus(), original.corpus());
  std::vector<std::string> queries = testing::random_vocabulary_queries(original, 100, 99);
  for (const auto& q : testing::load_qa_queries()) queries.push_back(q.text);
  for (const auto& q : queries) {
    const Answer a = original.query(q);
    const Answer b = restored.query(q);
    EXPECT_EQ(testing::answer_report(a), testing::answer_report(b)) << q;
    EXPECT_EQ(a.text, b.text) << q;
    EXPECT_EQ(a.supporting_ids, b.supporting_ids) << q;
    EXPECT_EQ(a.trace.routed_paths, b.trace.routed_paths) << q;
    ASSERT_EQ(a.trace.hits.size(), b.trace.hits.size()) << q;
    for (std::size_t i = 0; i < a.trace.hits.size(); ++i) {
      EXPECT_EQ(a.trace.hits[i].id, b.trace.hits[i].id);
      EXPECT_EQ(a.trace.hits[i].score, b.trace.hits[i].score);
    }
  }
}

TEST_F(PersistenceTest, RoundTripPredictsIdentically) {
  const Engine restored = load_state(dir_);
  for (const auto& [key, models] : trained().models()) {
    const auto& other = restored.models().at(key);
    for (std::size_t k = 0; k < models.size(); ++k) {
      EXPECT_EQ(serialize_model(models[k]), serialize_model(other[k]));
      for (const auto& r : trained().records()) {
        EXPECT_EQ(predict_proba(models[k], r.features).probabilities, predict_proba(other[k], r.features).probabilities);
      }
    }
  }
}

TEST_F(PersistenceTest, UntrainedStateLoads) {
  const fs::path plain = dir_ / "untrained";
  save_state(testing::build_qa_engine(), plain);
  const Engine e = load_state(plain);
  EXPECT_FALSE(e.trained());
  EXPECT_EQ(e.records().size(), 70u);
}

TEST_F(PersistenceTest, VersionBumpNamesBothVersions) {
  const Error e = load_error([&] {
    auto m = manifest();
    m["format_version"] = kStateFormatVersion + 1;
    write_manifest(m);
  });
  EXPECT_EQ(e.code(), ErrorCode::kVersion);
  const std::string what = e.what();
  EXPECT_NE(what.find(std::to_string(kStateFormatVersion + 1)), std::string::npos) << what;
  EXPECT_NE(what.find(std::to_string(kStateFormatVersion)), std::string::npos) << what;
}

TEST_F(PersistenceTest, FeatureSchemaMismatchRejected) {
  const Error e = load_error([&] {
    auto m = manifest();
    m["feature_schema"] = "fv0/other";
    write_manifest(m);
  });
  EXPECT_EQ(e.code(), ErrorCode::kVersion);
  EXPECT_NE(std::string(e.what()).find("fv0/other"), std::string::npos);
}

TEST_F(PersistenceTest, MissingNodeModelNamesTheNode) {
  const Error e = load_error([&] { fs::remove(dir_ / "models" / "sports" / "mlp.model"); });
  EXPECT_EQ(e.code(), ErrorCode::kIo);
  EXPECT_NE(std::string(e.what()).find("'sports'"), std::string::npos) << e.what();
}

TEST_F(PersistenceTest, CorruptedFileIsNamed) {
  for (const std::string name : {"vocab.bin", "index.bin", "corpus.bin"}) {
    save_state(trained(), dir_);
    const Error e = load_error([&] {
      std::fstream f(dir_ / name, std::ios::in | std::ios::out | std::ios::binary);
      f.seekp(12);
      char c = 0;
      f.read(&c, 1);
      f.seekp(12);
      c = static_cast<char>(c ^ 0x5A);
      f.write(&c, 1);
    });
    EXPECT_EQ(e.code(), ErrorCode::kIo) << name;
    EXPECT_NE(std::string(e.what()).find(name), std::string::npos) << e.what();
  }
}

TEST_F(PersistenceTest, CorruptedModelIsNamed) {
  const fs::path file = dir_ / "models" / "_root" / "tree.model";
  const Error e = load_error([&] { fs::resize_file(file, fs::file_size(file) / 2); });
  EXPECT_EQ(e.code(), ErrorCode::kIo);
  EXPECT_NE(std::string(e.what()).find("tree.model"), std::string::npos) << e.what();
}

TEST_F(PersistenceTest, MissingManifest) {
  const Error e = load_error([&] { fs::remove(dir_ / "manifest.json"); });
  EXPECT_EQ(e.code(), ErrorCode::kIo);
}

}  // namespace
}  // namespace semsearch
