#include "semsearch/persistence.hpp"

#include <cstdio>
#include <sstream>

#include <cereal/archives/portable_binary.hpp>
#include <cereal/types/string.hpp>
#include <cereal/types/vector.hpp>

#include "io_util.hpp"
#include "json.hpp"
#include "semsearch/error.hpp"

namespace semsearch {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

struct IndexCodec {
  template <class Ar>
  static void io(Ar& ar, InvertedIndex& idx) {
    std::uint64_t terms = idx.num_terms_;
    ar(terms, idx.offsets_);
    idx.num_terms_ = terms;
    std::uint64_t n = idx.postings_.size();
    ar(n);
    if constexpr (Ar::is_loading::value) idx.postings_.resize(n);
    for (auto& p : idx.postings_) ar(p.doc, p.tf);
    std::vector<std::uint64_t> leaves(idx.doc_leaf_.begin(), idx.doc_leaf_.end());
    ar(idx.doc_norms_, idx.doc_ids_, leaves, idx.idf_);
    idx.doc_leaf_.assign(leaves.begin(), leaves.end());
  }

  static void check(const InvertedIndex& idx, const std::string& source) {
    const bool ok = idx.offsets_.size() == idx.num_terms_ + 1 && idx.offsets_.front() == 0 &&
                    idx.offsets_.back() == idx.postings_.size() &&
                    std::is_sorted(idx.offsets_.begin(), idx.offsets_.end()) &&
                    idx.idf_.size() == idx.num_terms_ &&
                    idx.doc_norms_.size() == idx.doc_ids_.size() &&
                    idx.doc_leaf_.size() == idx.doc_ids_.size();
    if (!ok) throw Error(ErrorCode::kIo, source + ": inconsistent index tables");
    for (const auto& p : idx.postings_) {
      if (p.doc >= idx.doc_ids_.size()) throw Error(ErrorCode::kIo, source + ": posting out of range");
    }
  }
};

namespace {

constexpr const char* kKindNames[] = {"nb", "svm", "tree", "mlp"};

template <class F>
std::string write_payload(F&& body) {
  std::ostringstream out;
  {
    cereal::PortableBinaryOutputArchive ar(out);
    body(ar);
  }
  return out.str();
}

template <class F>
void read_payload(std::string_view payload, const std::string& source, F&& body) {
  std::istringstream in{std::string(payload)};
  try {
    cereal::PortableBinaryInputArchive ar(in);
    body(ar);
  } catch (const cereal::Exception& e) {
    throw Error(ErrorCode::kIo, source + ": truncated or malformed (" + e.what() + ")");
  }
}

std::string corpus_payload(const std::vector<CorpusRecord>& corpus) {
  return write_payload([&](auto& ar) {
    std::uint64_t n = corpus.size();
    ar(n);
    for (const auto& r : corpus) ar(r.id, r.category_path, r.text);
  });
}

std::string hex32(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

std::string read_framed(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::kIo, "missing state file " + path.string());
  return detail::read_file(path);
}

std::string function_words_text(const FunctionWordLexicon& lexicon) {
  std::string out;
  for (const auto& w : lexicon.words()) out += w + '\n';
  return out;
}

}  // namespace

fs::path model_dir_for(const std::string& node_key) {
  return node_key.empty() ? fs::path("_root") : fs::path(node_key);
}

void save_state(const Engine& engine, const fs::path& dir) {
  fs::create_directories(dir);
  const std::string corpus = corpus_payload(engine.corpus());
  detail::write_file(dir / "corpus.bin", detail::frame(kStateFormatVersion, corpus));

  const Vocabulary& vocab = engine.vocabulary();
  detail::write_file(dir / "vocab.bin",
                     detail::frame(kStateFormatVersion, write_payload([&](auto& ar) {
                                     std::vector<std::string> terms(vocab.terms().begin(),
                                                                    vocab.terms().end());
                                     std::vector<std::uint32_t> df(
                                         vocab.document_frequencies().begin(),
                                         vocab.document_frequencies().end());
                                     std::uint64_t n = vocab.total_documents();
                                     ar(terms, df, n);
                                   })));

  InvertedIndex index = engine.index();
  detail::write_file(dir / "index.bin", detail::frame(kStateFormatVersion, write_payload([&](auto& ar) {
                                                         IndexCodec::io(ar, index);
                                                       })));

  const auto& res = engine.resources();
  detail::write_file(dir / "resources" / "suffixes.tsv", res.suffixes.to_tsv());
  detail::write_file(dir / "resources" / "function_words.txt", function_words_text(res.function_words));
  detail::write_file(dir / "resources" / "synonyms.tsv", res.synonyms.to_tsv());
  detail::write_file(dir / "resources" / "knowledge_base.tsv", res.kb.to_tsv());

  fs::remove_all(dir / "models");
  ordered_json nodes = ordered_json::array();
  for (const auto& [key, models] : engine.models()) {
    const fs::path node_dir = dir / "models" / model_dir_for(key);
    for (std::size_t i = 0; i < models.size(); ++i) {
      save_model(models[i], node_dir / (std::string(kKindNames[i]) + ".model"));
    }
    nodes.push_back(key);
  }

  ordered_json manifest;
  manifest["format_version"] = kStateFormatVersion;
  manifest["feature_schema"] = std::string(kFeatureSchemaVersion);
  manifest["model_format_version"] = kModelFormatVersion;
  manifest["corpus_crc32"] = hex32(detail::crc32(corpus));
  manifest["sentences"] = engine.records().size();
  manifest["terms"] = vocab.size();
  manifest["nodes"] = nodes;
  detail::write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

Engine load_state(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) {
    throw Error(ErrorCode::kIo, "no state at " + dir.string() + " (missing manifest.json)");
  }
  ordered_json manifest;
  try {
    manifest = ordered_json::parse(detail::read_file(manifest_path));
  } catch (const ordered_json::exception& e) {
    throw Error(ErrorCode::kIo, manifest_path.string() + ": corrupted manifest (" + e.what() + ")");
  }
  std::uint32_t version = 0;
  std::string schema;
  std::string corpus_crc;
  std::vector<std::string> node_keys;
  try {
    version = manifest.at("format_version").get<std::uint32_t>();
    if (version == kStateFormatVersion) {
      schema = manifest.at("feature_schema").get<std::string>();
      corpus_crc = manifest.at("corpus_crc32").get<std::string>();
      node_keys = manifest.at("nodes").get<std::vector<std::string>>();
    }
  } catch (const ordered_json::exception& e) {
    throw Error(ErrorCode::kIo, manifest_path.string() + ": incomplete manifest (" + e.what() + ")");
  }
  if (version != kStateFormatVersion) {
    throw Error(ErrorCode::kVersion, "state format version " + std::to_string(version) +
                                         " in " + manifest_path.string() +
                                         ", this build reads version " +
                                         std::to_string(kStateFormatVersion));
  }
  if (schema != kFeatureSchemaVersion) {
    throw Error(ErrorCode::kVersion, "state uses feature schema " + schema +
                                         ", this build produces " +
                                         std::string(kFeatureSchemaVersion));
  }

  const fs::path corpus_path = dir / "corpus.bin";
  const std::string corpus_bytes = read_framed(corpus_path);
  const auto corpus_data = detail::unframe(corpus_bytes, kStateFormatVersion, corpus_path.string());
  if (hex32(detail::crc32(corpus_data)) != corpus_crc) {
    throw Error(ErrorCode::kIo, corpus_path.string() + ": corpus hash does not match the manifest");
  }
  std::vector<CorpusRecord> corpus;
  read_payload(corpus_data, corpus_path.string(), [&](auto& ar) {
    std::uint64_t n = 0;
    ar(n);
    if (n > (1u << 28)) throw Error(ErrorCode::kIo, corpus_path.string() + ": implausible size");
    corpus.resize(n);
    for (auto& r : corpus) ar(r.id, r.category_path, r.text);
  });

  const fs::path vocab_path = dir / "vocab.bin";
  const std::string vocab_bytes = read_framed(vocab_path);
  std::vector<std::string> terms;
  std::vector<std::uint32_t> df;
  std::uint64_t total = 0;
  read_payload(detail::unframe(vocab_bytes, kStateFormatVersion, vocab_path.string()),
               vocab_path.string(), [&](auto& ar) { ar(terms, df, total); });
  Vocabulary vocab;
  try {
    vocab = Vocabulary(std::move(terms), std::move(df), total);
  } catch (const Error& e) {
    throw Error(ErrorCode::kIo, vocab_path.string() + ": " + e.what());
  }

  const fs::path index_path = dir / "index.bin";
  const std::string index_bytes = read_framed(index_path);
  InvertedIndex index;
  read_payload(detail::unframe(index_bytes, kStateFormatVersion, index_path.string()),
               index_path.string(), [&](auto& ar) { IndexCodec::io(ar, index); });
  IndexCodec::check(index, index_path.string());

  const fs::path res = dir / "resources";
  LanguageResources resources{
      SuffixTable::load(res / "suffixes.tsv"),
      FunctionWordLexicon::load(res / "function_words.txt"),
      SynonymLexicon::load(res / "synonyms.tsv"),
      KnowledgeBase::load(res / "knowledge_base.tsv"),
  };

  ModelMap models;
  for (const auto& key : node_keys) {
    const fs::path node_dir = dir / "models" / model_dir_for(key);
    std::vector<Model> loaded;
    for (std::size_t i = 0; i < kClassifierKindCount; ++i) {
      const fs::path file = node_dir / (std::string(kKindNames[i]) + ".model");
      if (!fs::exists(file)) {
        throw Error(ErrorCode::kIo, "missing " + std::string(kKindNames[i]) + " model for node '" +
                                        (key.empty() ? "<root>" : key) + "' (" + file.string() + ")");
      }
      loaded.push_back(load_model(file));
      if (kind_of(loaded.back()) != kAllClassifierKinds[i]) {
        throw Error(ErrorCode::kIo, file.string() + ": holds a " +
                                        std::string(to_string(kind_of(loaded.back()))) + " model");
      }
    }
    models.emplace(key, NodeModels{std::move(loaded[0]), std::move(loaded[1]), std::move(loaded[2]),
                                   std::move(loaded[3])});
  }

  Engine engine = Engine::restore(std::move(corpus), std::move(resources), std::move(vocab),
                                  std::move(index), std::move(models));
  if (!engine.models().empty()) {
    for (auto node : engine.tree().decision_nodes()) {
      const std::string key = engine.tree().key_of(node);
      if (!engine.models().contains(key)) {
        throw Error(ErrorCode::kIo, "state has no models for node '" + (key.empty() ? "<root>" : key) + "'");
      }
    }
  }
  return engine;
}

}  // namespace semsearch
