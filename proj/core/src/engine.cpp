#include "semsearch/engine.hpp"

#include <algorithm>
#include <cstdlib>

#include "semsearch/error.hpp"

namespace semsearch {

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("SEMSEARCH_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  const std::filesystem::path build_dir = SEMSEARCH_BUILD_DATA_DIR;
  if (std::filesystem::exists(build_dir / "suffixes.tsv")) return build_dir;
  return SEMSEARCH_INSTALL_DATA_DIR;
}

LanguageResources load_resources(const ResourcePaths& paths) {
  const auto dir = default_data_dir();
  LanguageResources r{SuffixTable::load(paths.suffixes.value_or(dir / "suffixes.tsv")),
                      FunctionWordLexicon::load(paths.function_words.value_or(dir / "function_words.txt")),
                      SynonymLexicon::load(paths.synonyms.value_or(dir / "synonyms.tsv")),
                      {}};
  if (paths.kb) r.kb = KnowledgeBase::load(*paths.kb);
  return r;
}

Engine::Engine(std::vector<CorpusRecord> corpus, LanguageResources resources)
    : corpus_(std::move(corpus)), resources_(std::move(resources)) {}

void Engine::analyze_records() {
  tree_ = build_category_tree(corpus_);
  std::vector<std::string> ids;
  ids.reserve(corpus_.size());
  for (const auto& c : corpus_) ids.push_back(c.id);
  resources_.kb.validate(ids);

  records_.clear();
  records_.reserve(corpus_.size());
  for (const auto& c : corpus_) {
    SentenceRecord rec;
    rec.id = c.id;
    rec.category_path = c.category_path;
    rec.raw_text = c.text;
    rec.text = normalize(c.text);
    rec.tokens = tokenize(rec.text);
    if (rec.tokens.empty()) {
      throw Error(ErrorCode::kData, "sentence '" + c.id + "' has no text after normalization");
    }
    rec.analysis = analyze_query(rec.tokens, resources_.suffixes, resources_.function_words);
    records_.push_back(std::move(rec));
  }
}

void Engine::vectorize_records() {
  for (auto& rec : records_) rec.features = vectorize(rec.tokens, vocab_, rec.analysis);
}

Engine Engine::build(std::vector<CorpusRecord> corpus, LanguageResources resources) {
  Engine e(std::move(corpus), std::move(resources));
  e.analyze_records();
  std::vector<TokenList> token_lists;
  token_lists.reserve(e.records_.size());
  for (const auto& r : e.records_) token_lists.push_back(r.tokens);
  e.vocab_ = build_vocabulary(token_lists);
  e.vectorize_records();
  e.index_ = InvertedIndex::build(e.records_, e.vocab_, e.tree_);
  return e;
}

Engine Engine::restore(std::vector<CorpusRecord> corpus, LanguageResources resources,
                       Vocabulary vocab, InvertedIndex index, ModelMap models) {
  Engine e(std::move(corpus), std::move(resources));
  e.analyze_records();
  e.vocab_ = std::move(vocab);
  e.vectorize_records();
  if (index.document_count() != e.records_.size()) {
    throw Error(ErrorCode::kIo, "index covers " + std::to_string(index.document_count()) +
                                    " sentences, corpus has " + std::to_string(e.records_.size()));
  }
  e.index_ = std::move(index);
  e.models_ = std::move(models);
  return e;
}

Dataset Engine::dataset_for(CategoryTree::NodeId node, std::vector<std::string>* ids) const {
  Dataset data;
  data.categories = tree_.child_names(node);
  data.num_terms = vocab_.size();
  data.dense_size = dense::kSize;
  for (const auto& rec : records_) {
    const auto leaf = tree_.find(rec.category_path);
    const auto child = tree_.child_index_toward(node, *leaf);
    if (!child) continue;
    data.examples.push_back({rec.features, *child});
    if (ids != nullptr) ids->push_back(rec.id);
  }
  return data;
}

Dataset Engine::dataset_for(std::string_view node_key, std::vector<std::string>* ids) const {
  const auto node = tree_.find(parse_path_key(node_key));
  if (!node || tree_.node(*node).children.size() < 2) {
    throw Error(ErrorCode::kUsage, "'" + std::string(node_key) +
                                       "' is not a category node with subcategories");
  }
  return dataset_for(*node, ids);
}

void Engine::train(const ClassifierOptions& options, const Progress& progress) {
  ModelMap trained;
  for (auto node : tree_.decision_nodes()) {
    const Dataset data = dataset_for(node);
    const std::string key = tree_.key_of(node);
    if (progress) progress(key, data.examples.size());
    trained.emplace(key, train_node_models(data, options));
  }
  models_ = std::move(trained);
}

std::optional<std::size_t> Engine::find_record(std::string_view id) const {
  const auto it = std::lower_bound(records_.begin(), records_.end(), id,
                                   [](const SentenceRecord& r, std::string_view v) { return r.id < v; });
  if (it == records_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - records_.begin());
}

ProcessedQuery Engine::process(std::string_view text) const {
  ProcessedQuery q;
  q.normalized = normalize(text);
  const TokenList raw_tokens = tokenize(q.normalized);
  if (raw_tokens.empty()) throw Error(ErrorCode::kData, "empty query");
  auto expanded = expand_query(raw_tokens, resources_.synonyms, vocab_);
  q.tokens = std::move(expanded.tokens);
  q.expansions = std::move(expanded.replacements);
  q.analysis = analyze_query(q.tokens, resources_.suffixes, resources_.function_words);
  q.features = vectorize(q.tokens, vocab_, q.analysis);
  return q;
}

Answer Engine::query(std::string_view text, const EngineOptions& options) const {
  if (!trained()) throw Error(ErrorCode::kUsage, "the engine has no trained models; run train first");
  const ProcessedQuery q = process(text);
  RouteResult route = route_recursive(q.features, tree_, models_, options.ensemble);
  const HitList hits = index_.hit_sentences(q.features, route.paths, tree_, options.top_n);
  Answer answer = extract_answer(q.tokens, q.analysis, hits, resources_.kb, records_,
                                 resources_.suffixes, options.answer);
  answer.trace.normalized_query = q.normalized;
  answer.trace.expansions = q.expansions;
  answer.trace.votes = std::move(route.audit);
  answer.trace.routed_paths = std::move(route.paths);
  return answer;
}

}  // namespace semsearch
