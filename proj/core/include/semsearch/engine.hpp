#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semsearch/answer.hpp"
#include "semsearch/category_tree.hpp"
#include "semsearch/corpus.hpp"
#include "semsearch/ensemble.hpp"
#include "semsearch/features.hpp"
#include "semsearch/index.hpp"
#include "semsearch/knowledge_base.hpp"
#include "semsearch/morphology.hpp"

namespace semsearch {

struct LanguageResources {
  SuffixTable suffixes;
  FunctionWordLexicon function_words;
  SynonymLexicon synonyms;
  KnowledgeBase kb;
};

/// Overrides for the shipped resource files; unset entries use the data
/// directory (the knowledge base defaults to empty).
struct ResourcePaths {
  std::optional<std::filesystem::path> suffixes;
  std::optional<std::filesystem::path> function_words;
  std::optional<std::filesystem::path> synonyms;
  std::optional<std::filesystem::path> kb;
};

/// $SEMSEARCH_DATA_DIR, else the source tree's data directory, else the
/// installed one.
std::filesystem::path default_data_dir();

LanguageResources load_resources(const ResourcePaths& paths = {});

struct EngineOptions {
  ClassifierOptions classifiers;
  EnsembleConfig ensemble;
  std::size_t top_n = 5;
  AnswerOptions answer;
};

/// A query after normalization, tokenization, synonym expansion, analysis
/// and vectorization.
struct ProcessedQuery {
  std::string normalized;
  TokenList tokens;  // after expansion
  std::vector<Replacement> expansions;
  QueryAnalysis analysis;
  FeatureVector features;
};

/// The whole pipeline over one repository: taxonomy, processed sentences,
/// vocabulary, index and per-node ensembles.
class Engine {
 public:
  /// Normalizes, analyzes and vectorizes every record, builds the tree,
  /// vocabulary and index. Throws Error(kData) for an empty corpus,
  /// duplicate ids or knowledge-base rows citing unknown sentences.
  static Engine build(std::vector<CorpusRecord> corpus, LanguageResources resources);

  /// Restores persisted parts. Records are reprocessed against `vocab`.
  static Engine restore(std::vector<CorpusRecord> corpus, LanguageResources resources,
                        Vocabulary vocab, InvertedIndex index, ModelMap models);

  using Progress = std::function<void(const std::string& node_key, std::size_t examples)>;

  /// Trains the four classifiers at every node with two or more children.
  void train(const ClassifierOptions& options = {}, const Progress& progress = {});
  bool trained() const noexcept { return !models_.empty(); }

  /// Sentences under `node`, labelled by the child they fall under. `ids`
  /// receives the sentence id of every example when given.
  Dataset dataset_for(CategoryTree::NodeId node, std::vector<std::string>* ids = nullptr) const;
  /// Same, addressed by path key; throws Error(kUsage) for an unknown or
  /// non-decision node.
  Dataset dataset_for(std::string_view node_key, std::vector<std::string>* ids = nullptr) const;

  ProcessedQuery process(std::string_view text) const;
  Answer query(std::string_view text, const EngineOptions& options = {}) const;

  const std::vector<CorpusRecord>& corpus() const noexcept { return corpus_; }
  const std::vector<SentenceRecord>& records() const noexcept { return records_; }
  const CategoryTree& tree() const noexcept { return tree_; }
  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  const InvertedIndex& index() const noexcept { return index_; }
  const ModelMap& models() const noexcept { return models_; }
  const LanguageResources& resources() const noexcept { return resources_; }
  std::optional<std::size_t> find_record(std::string_view id) const;

 private:
  Engine(std::vector<CorpusRecord> corpus, LanguageResources resources);
  void analyze_records();
  void vectorize_records();

  std::vector<CorpusRecord> corpus_;  // sorted by id
  LanguageResources resources_;
  CategoryTree tree_;
  std::vector<SentenceRecord> records_;
  Vocabulary vocab_;
  InvertedIndex index_;
  ModelMap models_;
};

}  // namespace semsearch
