#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>

#include "semsearch/config.hpp"
#include "semsearch/error.hpp"

namespace semsearch {
namespace {

ErrorCode parse_error_code(const std::string& text) {
  try {
    parse_config(text, "test.ini");
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted: " << text;
  return ErrorCode::kInvariant;
}

TEST(Config, EmptyTextGivesDefaults) {
  const EngineConfig c = parse_config("", "empty.ini");
  const EngineConfig d;
  EXPECT_EQ(c.engine.ensemble.null_floor, d.engine.ensemble.null_floor);
  EXPECT_EQ(c.engine.top_n, 5u);
  EXPECT_EQ(c.eval.k, 10u);
  EXPECT_FALSE(c.corpus);
}

TEST(Config, ReadsEverySection) {
  const EngineConfig c = parse_config(
      "[paths]\ncorpus = data/c.jsonl\nstate = /abs/state\n"
      "[ensemble]\nnull_floor = 0.3\n"
      "[nb]\nalpha = 2\n"
      "[svm]\nc = 4\nmax_passes = 7\n"
      "[tree]\nmin_leaf = 3\nprune = false\n"
      "[mlp]\nepochs = 12\nseed = 9\n"
      "[eval]\nk = 4\npct = 70\n"
      "[query]\ntop_n = 3\nthreshold = 0.5\n",
      "full.ini", "/base");
  EXPECT_EQ(*c.corpus, std::filesystem::path("/base/data/c.jsonl"));
  EXPECT_EQ(*c.state_dir, std::filesystem::path("/abs/state"));
  EXPECT_EQ(c.engine.ensemble.null_floor, 0.3);
  EXPECT_EQ(c.engine.classifiers.nb.alpha, 2.0);
  EXPECT_EQ(c.engine.classifiers.svm.C, 4.0);
  EXPECT_EQ(c.engine.classifiers.svm.max_passes, 7u);
  EXPECT_EQ(c.engine.classifiers.tree.min_leaf, 3u);
  EXPECT_FALSE(c.engine.classifiers.tree.prune);
  EXPECT_EQ(c.engine.classifiers.mlp.epochs, 12u);
  EXPECT_EQ(c.engine.classifiers.mlp.seed, 9u);
  EXPECT_EQ(c.eval.k, 4u);
  EXPECT_EQ(c.eval.pct, 70.0);
  EXPECT_EQ(c.engine.top_n, 3u);
  EXPECT_EQ(c.engine.answer.threshold, 0.5);
}

TEST(Config, RejectsTyposAndBadValues) {
  EXPECT_EQ(parse_error_code("[mlpp]\nepochs = 3\n"), ErrorCode::kParse);
  EXPECT_EQ(parse_error_code("[mlp]\nepoch = 3\n"), ErrorCode::kParse);
  EXPECT_EQ(parse_error_code("stray = 1\n"), ErrorCode::kParse);
  EXPECT_EQ(parse_error_code("[svm]\nc = lots\n"), ErrorCode::kParse);
  EXPECT_EQ(parse_error_code("[tree]\nprune = maybe\n"), ErrorCode::kParse);
  EXPECT_EQ(parse_error_code("[svm]\nc = -1\n"), ErrorCode::kUsage);
  EXPECT_EQ(parse_error_code("[eval]\nk = 1\n"), ErrorCode::kUsage);
  EXPECT_EQ(parse_error_code("[eval]\npct = 100\n"), ErrorCode::kUsage);
  EXPECT_EQ(parse_error_code("[ensemble]\nweight = 0.3\n"), ErrorCode::kUsage);
  EXPECT_EQ(parse_error_code("[query]\nthreshold = 1.5\n"), ErrorCode::kUsage);
  EXPECT_EQ(parse_error_code("[mlp]\nmomentum = 1\n"), ErrorCode::kUsage);
}

TEST(Config, ValueErrorsNameTheKey) {
  try {
    parse_config("[tree]\nconfidence = 0.9\n", "t.ini");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("tree.confidence"), std::string::npos) << e.what();
  }
}

TEST(Config, DefaultTextRoundTrips) {
  const std::string text = default_config_text();
  EXPECT_NO_THROW(parse_config(text, "defaults.ini"));
  // Uncommenting every numeric key must reproduce the defaults.
  const std::regex numeric_line(R"(^# ([a-z_]+ = [0-9.e+-]+|prune = \w+)$)", std::regex::multiline);
  const std::string uncommented = std::regex_replace(text, numeric_line, "$1");
  ASSERT_NE(uncommented, text);
  const EngineConfig c = parse_config(uncommented, "uncommented.ini");
  const EngineConfig d;
  EXPECT_EQ(c.engine.ensemble.per_classifier_weight, d.engine.ensemble.per_classifier_weight);
  EXPECT_EQ(c.engine.classifiers.nb.alpha, d.engine.classifiers.nb.alpha);
  EXPECT_EQ(c.engine.classifiers.svm.C, d.engine.classifiers.svm.C);
  EXPECT_EQ(c.engine.classifiers.tree.confidence, d.engine.classifiers.tree.confidence);
  EXPECT_EQ(c.engine.classifiers.tree.prune, d.engine.classifiers.tree.prune);
  EXPECT_EQ(c.engine.classifiers.mlp.epochs, d.engine.classifiers.mlp.epochs);
  EXPECT_EQ(c.engine.classifiers.mlp.lr, d.engine.classifiers.mlp.lr);
  EXPECT_EQ(c.eval.pct, d.eval.pct);
  EXPECT_EQ(c.engine.answer.threshold, d.engine.answer.threshold);
}

TEST(Config, LoadFromFile) {
  const auto dir = std::filesystem::temp_directory_path() / "semsearch_config_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "c.ini") << "[paths]\nkb = kb.tsv\n";
  const EngineConfig c = load_config(dir / "c.ini");
  EXPECT_EQ(*c.resources.kb, dir / "kb.tsv");
  try {
    load_config(dir / "missing.ini");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace semsearch
