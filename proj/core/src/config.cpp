#include "semsearch/config.hpp"

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "io_util.hpp"
#include "semsearch/error.hpp"

namespace semsearch {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"paths", {"corpus", "state", "suffixes", "function_words", "synonyms", "kb"}},
      {"ensemble", {"weight", "win_threshold", "null_floor"}},
      {"nb", {"alpha"}},
      {"svm", {"c", "tol", "max_passes"}},
      {"tree", {"min_leaf", "confidence", "prune"}},
      {"mlp", {"hidden", "lr", "momentum", "epochs", "top_k", "seed"}},
      {"eval", {"k", "seed", "pct"}},
      {"query", {"top_n", "threshold"}},
  };
  return keys;
}

class Reader {
 public:
  Reader(const pt::ptree& tree, std::string source, std::filesystem::path base)
      : tree_(tree), source_(std::move(source)), base_(std::move(base)) {}

  template <class T>
  void get(const char* key, T& out) const {
    const auto node = tree_.get_child_optional(pt::ptree::path_type(key, '.'));
    if (!node) return;
    const auto value = node->get_value_optional<T>();
    if (!value) {
      throw Error(ErrorCode::kParse, source_ + ": '" + key + "' has an invalid value '" +
                                         node->data() + "'");
    }
    out = *value;
  }

  void get_bool(const char* key, bool& out) const {
    std::string text;
    get(key, text);
    if (text.empty()) return;
    if (text == "true" || text == "1" || text == "yes" || text == "on") {
      out = true;
    } else if (text == "false" || text == "0" || text == "no" || text == "off") {
      out = false;
    } else {
      throw Error(ErrorCode::kParse, source_ + ": '" + key + "' must be true or false");
    }
  }

  void get_path(const char* key, std::optional<std::filesystem::path>& out) const {
    std::string text;
    get(key, text);
    if (text.empty()) return;
    std::filesystem::path p = text;
    out = p.is_absolute() || base_.empty() ? p : base_ / p;
  }

 private:
  const pt::ptree& tree_;
  std::string source_;
  std::filesystem::path base_;
};

void require(bool ok, const char* key, const std::string& why) {
  if (!ok) throw Error(ErrorCode::kUsage, std::string("config '") + key + "' " + why);
}

}  // namespace

void EngineConfig::validate() const {
  engine.ensemble.validate();
  const auto& c = engine.classifiers;
  require(c.nb.alpha > 0.0 && std::isfinite(c.nb.alpha), "nb.alpha", "must be positive");
  require(c.svm.C > 0.0 && std::isfinite(c.svm.C), "svm.c", "must be positive");
  require(c.svm.tol > 0.0, "svm.tol", "must be positive");
  require(c.svm.max_passes >= 1, "svm.max_passes", "must be at least 1");
  require(c.tree.min_leaf >= 1, "tree.min_leaf", "must be at least 1");
  require(c.tree.confidence > 0.0 && c.tree.confidence <= 0.5, "tree.confidence",
          "must lie in (0, 0.5]");
  require(c.mlp.lr > 0.0, "mlp.lr", "must be positive");
  require(c.mlp.momentum >= 0.0 && c.mlp.momentum < 1.0, "mlp.momentum", "must lie in [0, 1)");
  require(c.mlp.epochs >= 1, "mlp.epochs", "must be at least 1");
  require(c.mlp.top_k >= 1, "mlp.top_k", "must be at least 1");
  require(eval.k >= 2, "eval.k", "must be at least 2");
  require(eval.pct > 0.0 && eval.pct < 100.0, "eval.pct", "must lie strictly between 0 and 100");
  require(engine.top_n >= 1, "query.top_n", "must be at least 1");
  require(engine.answer.threshold >= 0.0 && engine.answer.threshold <= 1.0, "query.threshold",
          "must lie in [0, 1]");
}

EngineConfig parse_config(std::string_view text, const std::string& source,
                          const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::kParse, source + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  const auto& known = known_keys();
  for (const auto& [section, body] : tree) {
    const auto it = known.find(section);
    if (it == known.end() || body.empty()) {
      throw Error(ErrorCode::kParse, source + ": unknown section or top-level key '" + section + "'");
    }
    for (const auto& entry : body) {
      if (!it->second.contains(entry.first)) {
        throw Error(ErrorCode::kParse, source + ": unknown key '" + section + "." + entry.first + "'");
      }
    }
  }

  EngineConfig cfg;
  const Reader r(tree, source, base_dir);
  r.get_path("paths.corpus", cfg.corpus);
  r.get_path("paths.state", cfg.state_dir);
  r.get_path("paths.suffixes", cfg.resources.suffixes);
  r.get_path("paths.function_words", cfg.resources.function_words);
  r.get_path("paths.synonyms", cfg.resources.synonyms);
  r.get_path("paths.kb", cfg.resources.kb);
  auto& e = cfg.engine;
  r.get("ensemble.weight", e.ensemble.per_classifier_weight);
  r.get("ensemble.win_threshold", e.ensemble.win_threshold);
  r.get("ensemble.null_floor", e.ensemble.null_floor);
  r.get("nb.alpha", e.classifiers.nb.alpha);
  r.get("svm.c", e.classifiers.svm.C);
  r.get("svm.tol", e.classifiers.svm.tol);
  r.get("svm.max_passes", e.classifiers.svm.max_passes);
  r.get("tree.min_leaf", e.classifiers.tree.min_leaf);
  r.get("tree.confidence", e.classifiers.tree.confidence);
  r.get_bool("tree.prune", e.classifiers.tree.prune);
  r.get("mlp.hidden", e.classifiers.mlp.hidden);
  r.get("mlp.lr", e.classifiers.mlp.lr);
  r.get("mlp.momentum", e.classifiers.mlp.momentum);
  r.get("mlp.epochs", e.classifiers.mlp.epochs);
  r.get("mlp.top_k", e.classifiers.mlp.top_k);
  r.get("mlp.seed", e.classifiers.mlp.seed);
  r.get("eval.k", cfg.eval.k);
  r.get("eval.seed", cfg.eval.seed);
  r.get("eval.pct", cfg.eval.pct);
  r.get("query.top_n", e.top_n);
  r.get("query.threshold", e.answer.threshold);
  cfg.validate();
  return cfg;
}

EngineConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kIo, "config file " + path.string() + " does not exist");
  }
  return parse_config(detail::read_file(path), path.string(), path.parent_path());
}

std::string default_config_text() {
  const EngineConfig d;
  const auto& c = d.engine.classifiers;
  std::ostringstream out;
  out << "# semsearch configuration; command-line flags override these values.\n"
      << "[paths]\n"
      << "# corpus = corpus.jsonl\n# state = state\n# suffixes = suffixes.tsv\n"
      << "# function_words = function_words.txt\n# synonyms = synonyms.tsv\n# kb = kb.tsv\n\n"
      << "[ensemble]\n"
      << "# weight = " << d.engine.ensemble.per_classifier_weight << "\n"
      << "# win_threshold = " << d.engine.ensemble.win_threshold << "\n"
      << "# null_floor = " << d.engine.ensemble.null_floor << "\n\n"
      << "[nb]\n# alpha = " << c.nb.alpha << "\n\n"
      << "[svm]\n# c = " << c.svm.C << "\n# tol = " << c.svm.tol
      << "\n# max_passes = " << c.svm.max_passes << "\n\n"
      << "[tree]\n# min_leaf = " << c.tree.min_leaf << "\n# confidence = " << c.tree.confidence
      << "\n# prune = " << (c.tree.prune ? "true" : "false") << "\n\n"
      << "[mlp]\n# hidden = " << c.mlp.hidden << "\n# lr = " << c.mlp.lr
      << "\n# momentum = " << c.mlp.momentum << "\n# epochs = " << c.mlp.epochs
      << "\n# top_k = " << c.mlp.top_k << "\n# seed = " << c.mlp.seed << "\n\n"
      << "[eval]\n# k = " << d.eval.k << "\n# seed = " << d.eval.seed << "\n# pct = " << d.eval.pct
      << "\n\n"
      << "[query]\n# top_n = " << d.engine.top_n << "\n# threshold = " << d.engine.answer.threshold
      << "\n";
  return out.str();
}

}  // namespace semsearch
