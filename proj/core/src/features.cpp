#include "semsearch/features.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "io_util.hpp"
#include "semsearch/error.hpp"

namespace semsearch {

std::vector<std::string> index_terms(std::span<const Token> tokens) {
  std::vector<std::string> terms;
  terms.reserve(tokens.size());
  for (const Token& t : tokens) {
    if (!t.is_punct()) terms.push_back(t.normalized);
  }
  return terms;
}

Vocabulary::Vocabulary(std::vector<std::string> terms,
                       std::vector<std::uint32_t> document_frequency,
                       std::size_t total_documents)
    : terms_(std::move(terms)),
      document_frequency_(std::move(document_frequency)),
      total_documents_(total_documents) {
  if (terms_.size() != document_frequency_.size()) {
    throw Error(ErrorCode::kData, "vocabulary term and frequency counts differ");
  }
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (document_frequency_[i] < 1 || document_frequency_[i] > total_documents_) {
      throw Error(ErrorCode::kData, "document frequency out of range for '" + terms_[i] + "'");
    }
    if (i > 0 && !(terms_[i - 1] < terms_[i])) {
      throw Error(ErrorCode::kData, "vocabulary terms are not sorted and unique");
    }
    ids_.emplace(terms_[i], static_cast<TermId>(i));
  }
}

std::optional<TermId> Vocabulary::id(std::string_view term) const {
  const auto it = ids_.find(term);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::size_t Vocabulary::df(std::string_view term) const {
  const auto found = id(term);
  return found ? document_frequency_[*found] : 0;
}

double Vocabulary::idf_for(std::size_t df) const {
  return std::log((1.0 + static_cast<double>(total_documents_)) /
                  (1.0 + static_cast<double>(df))) +
         1.0;
}

Vocabulary build_vocabulary(std::span<const TokenList> corpus) {
  if (corpus.empty()) throw Error(ErrorCode::kData, "cannot build a vocabulary from no sentences");
  std::map<std::string, std::uint32_t> df;
  for (const TokenList& sentence : corpus) {
    std::vector<std::string> terms = index_terms(sentence);
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    for (auto& t : terms) ++df[std::move(t)];
  }
  std::vector<std::string> terms;
  std::vector<std::uint32_t> freqs;
  terms.reserve(df.size());
  freqs.reserve(df.size());
  for (auto& [term, count] : df) {
    terms.push_back(term);
    freqs.push_back(count);
  }
  return Vocabulary(std::move(terms), std::move(freqs), corpus.size());
}

namespace {

double entropy_of(const std::map<std::string, std::size_t>& counts, std::size_t total) {
  double h = 0.0;
  for (const auto& [term, c] : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

std::map<std::string, std::size_t> term_counts(const std::vector<std::string>& terms) {
  std::map<std::string, std::size_t> counts;
  for (const auto& t : terms) ++counts[t];
  return counts;
}

}  // namespace

double entropy(std::span<const Token> tokens) {
  const auto terms = index_terms(tokens);
  if (terms.empty()) throw Error(ErrorCode::kData, "entropy of an empty token list");
  return entropy_of(term_counts(terms), terms.size());
}

FeatureVector vectorize(std::span<const Token> tokens, const Vocabulary& vocab,
                        const QueryAnalysis& analysis) {
  const auto terms = index_terms(tokens);
  const auto counts = term_counts(terms);

  FeatureVector fv;
  std::map<TermId, std::size_t> in_vocab;
  for (const auto& [term, c] : counts) {
    if (const auto id = vocab.id(term)) in_vocab.emplace(*id, c);
  }
  double norm_sq = 0.0;
  for (const auto& [id, c] : in_vocab) {
    const double w = static_cast<double>(c) * vocab.idf(id);
    fv.sparse.push_back({id, w});
    fv.counts.push_back({id, static_cast<double>(c)});
    norm_sq += w * w;
  }
  if (norm_sq > 0.0) {
    const double norm = std::sqrt(norm_sq);
    for (auto& e : fv.sparse) e.weight /= norm;
  }

  fv.dense.assign(dense::kSize, 0.0);
  fv.dense[dense::kLengthTokens] = static_cast<double>(terms.size());
  fv.dense[dense::kDimensionality] = static_cast<double>(counts.size());
  fv.dense[dense::kEntropyBits] = terms.empty() ? 0.0 : entropy_of(counts, terms.size());
  fv.dense[dense::kFunctionWords] = static_cast<double>(analysis.function_words);
  fv.dense[dense::kContentWords] = static_cast<double>(analysis.content_words);
  fv.dense[dense::kSubjects] = static_cast<double>(analysis.subject_count);
  fv.dense[dense::kObjects] = static_cast<double>(analysis.object_count);
  if (analysis.tense) {
    fv.dense[dense::kTenseBegin + static_cast<std::size_t>(*analysis.tense)] = 1.0;
  }
  if (analysis.person) {
    fv.dense[dense::kPersonBegin + static_cast<std::size_t>(*analysis.person)] = 1.0;
  }
  fv.dense[dense::kSentenceTypeBegin + static_cast<std::size_t>(analysis.sentence_type)] = 1.0;
  fv.dense[dense::kGender] = 0.0;  // verbs carry no gender agreement
  return fv;
}

SynonymLexicon::SynonymLexicon(std::map<std::string, std::vector<std::string>> entries) {
  for (auto& [word, syns] : entries) {
    std::vector<std::string> kept;
    for (auto& s : syns) {
      if (s != word && std::find(kept.begin(), kept.end(), s) == kept.end()) {
        kept.push_back(std::move(s));
      }
    }
    if (!kept.empty()) entries_.emplace(word, std::move(kept));
  }
}

SynonymLexicon SynonymLexicon::load(const std::filesystem::path& path) {
  return parse(detail::read_file(path), path.string());
}

SynonymLexicon SynonymLexicon::parse(std::string_view contents, std::string_view source_name) {
  std::map<std::string, std::vector<std::string>> entries;
  detail::for_each_line(contents, [&](std::size_t line_no, std::string_view line) {
    if (detail::is_comment_or_blank(line)) return;
    const auto fields = detail::split(line, '\t');
    if (fields.size() != 2) {
      throw Error(ErrorCode::kParse, std::string(source_name) + ":" + std::to_string(line_no) +
                                         ": expected word<TAB>synonyms");
    }
    auto& syns = entries[normalize(detail::trim(fields[0]))];
    for (std::string_view s : detail::split(fields[1], ',')) {
      s = detail::trim(s);
      if (!s.empty()) syns.push_back(normalize(s));
    }
  });
  return SynonymLexicon(std::move(entries));
}

const std::vector<std::string>* SynonymLexicon::synonyms(std::string_view word) const {
  const auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string SynonymLexicon::to_tsv() const {
  std::ostringstream out;
  for (const auto& [word, syns] : entries_) {
    out << word << '\t';
    for (std::size_t i = 0; i < syns.size(); ++i) out << (i ? "," : "") << syns[i];
    out << '\n';
  }
  return out.str();
}

ExpandedQuery expand_query(std::span<const Token> tokens, const SynonymLexicon& synonyms,
                           const Vocabulary& vocab) {
  ExpandedQuery out{TokenList(tokens.begin(), tokens.end()), {}};
  for (std::size_t i = 0; i < out.tokens.size(); ++i) {
    Token& tok = out.tokens[i];
    if (tok.is_punct() || vocab.df(tok.normalized) > 0) continue;
    const auto* candidates = synonyms.synonyms(tok.normalized);
    if (candidates == nullptr) continue;
    const std::string* best = nullptr;
    std::size_t best_df = 0;
    for (const auto& s : *candidates) {
      const std::size_t df = vocab.df(s);
      if (df > best_df) {
        best = &s;
        best_df = df;
      }
    }
    if (best == nullptr) continue;
    out.replacements.push_back({i, tok.normalized, *best});
    tok.surface = *best;
    tok.normalized = *best;
  }
  return out;
}

double sparse_dot(std::span<const TermWeight> a, std::span<const TermWeight> b) noexcept {
  double sum = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].term < b[j].term) {
      ++i;
    } else if (b[j].term < a[i].term) {
      ++j;
    } else {
      sum += a[i++].weight * b[j++].weight;
    }
  }
  return sum;
}

}  // namespace semsearch
