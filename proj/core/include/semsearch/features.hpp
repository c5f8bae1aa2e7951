#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semsearch/morphology.hpp"
#include "semsearch/text.hpp"

namespace semsearch {

/// Bumped whenever the dense layout or the sparse weighting changes.
inline constexpr std::string_view kFeatureSchemaVersion = "fv1/tfidf-l2/dense26";

/// Fixed layout of FeatureVector::dense.
namespace dense {
inline constexpr std::size_t kLengthTokens = 0;
inline constexpr std::size_t kDimensionality = 1;  // distinct terms
inline constexpr std::size_t kEntropyBits = 2;
inline constexpr std::size_t kFunctionWords = 3;
inline constexpr std::size_t kContentWords = 4;
inline constexpr std::size_t kSubjects = 5;
inline constexpr std::size_t kObjects = 6;
inline constexpr std::size_t kTenseBegin = 7;                                   // 10 slots
inline constexpr std::size_t kPersonBegin = kTenseBegin + kTenseCount;          // 3 slots
inline constexpr std::size_t kSentenceTypeBegin = kPersonBegin + kPersonCount;  // 5 slots
inline constexpr std::size_t kGender = kSentenceTypeBegin + kSentenceTypeCount;
inline constexpr std::size_t kSize = kGender + 1;
}  // namespace dense

using TermId = std::uint32_t;

struct TermWeight {
  TermId term;
  double weight;

  friend bool operator==(const TermWeight&, const TermWeight&) = default;
};

struct FeatureVector {
  std::vector<TermWeight> sparse;  // tf-idf, L2-normalized, ids increasing
  std::vector<TermWeight> counts;  // raw term frequencies, same ids as sparse
  std::vector<double> dense;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Word tokens used as index terms: normalized forms of non-punctuation
/// tokens, in order.
std::vector<std::string> index_terms(std::span<const Token> tokens);

class Vocabulary {
 public:
  Vocabulary() = default;
  /// Restores a persisted vocabulary. Terms must be sorted and unique and
  /// every document frequency at least 1.
  Vocabulary(std::vector<std::string> terms, std::vector<std::uint32_t> document_frequency,
             std::size_t total_documents);

  std::optional<TermId> id(std::string_view term) const;
  std::size_t df(std::string_view term) const;  // 0 when absent
  std::size_t df(TermId id) const { return document_frequency_[id]; }
  double idf(TermId id) const { return idf_for(document_frequency_[id]); }
  /// ln((1 + N) / (1 + df)) + 1
  double idf_for(std::size_t df) const;

  const std::string& term(TermId id) const { return terms_[id]; }
  std::size_t size() const noexcept { return terms_.size(); }
  std::size_t total_documents() const noexcept { return total_documents_; }

  std::span<const std::string> terms() const noexcept { return terms_; }
  std::span<const std::uint32_t> document_frequencies() const noexcept {
    return document_frequency_;
  }

 private:
  std::vector<std::string> terms_;
  std::vector<std::uint32_t> document_frequency_;
  std::map<std::string, TermId, std::less<>> ids_;
  std::size_t total_documents_ = 0;
};

/// Document frequencies over tokenized sentences; term ids follow sorted
/// term order. Throws Error(kData) on an empty corpus.
Vocabulary build_vocabulary(std::span<const TokenList> corpus);

/// Shannon entropy in bits of the term distribution. Throws Error(kData)
/// when the tokens contain no words.
double entropy(std::span<const Token> tokens);

/// Sparse tf-idf block plus the dense meta-features of `analysis`.
/// Out-of-vocabulary words add nothing to the sparse block but still count
/// in length, dimensionality and entropy.
FeatureVector vectorize(std::span<const Token> tokens, const Vocabulary& vocab,
                        const QueryAnalysis& analysis);

/// Word -> ordered synonyms. TSV lines `word<TAB>syn1,syn2,...`.
class SynonymLexicon {
 public:
  SynonymLexicon() = default;
  /// Self-references are dropped.
  explicit SynonymLexicon(std::map<std::string, std::vector<std::string>> entries);

  static SynonymLexicon load(const std::filesystem::path& path);
  static SynonymLexicon parse(std::string_view contents, std::string_view source_name);

  const std::vector<std::string>* synonyms(std::string_view word) const;
  std::size_t size() const noexcept { return entries_.size(); }
  std::string to_tsv() const;

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> entries_;
};

struct Replacement {
  std::size_t token_index;
  std::string original;
  std::string replacement;
};

struct ExpandedQuery {
  TokenList tokens;
  std::vector<Replacement> replacements;
};

/// Replaces each out-of-vocabulary word by its in-vocabulary synonym with
/// the highest document frequency (first listed wins ties).
ExpandedQuery expand_query(std::span<const Token> tokens, const SynonymLexicon& synonyms,
                           const Vocabulary& vocab);

/// Dot product of two id-sorted sparse vectors.
double sparse_dot(std::span<const TermWeight> a, std::span<const TermWeight> b) noexcept;

}  // namespace semsearch
