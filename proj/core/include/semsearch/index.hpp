#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semsearch/category_tree.hpp"
#include "semsearch/corpus.hpp"
#include "semsearch/features.hpp"

namespace semsearch {

struct Hit {
  std::size_t doc = 0;  // position in the record list
  std::string id;
  double score = 0.0;

  friend bool operator==(const Hit&, const Hit&) = default;
};

struct HitList {
  std::vector<Hit> hits;
  std::optional<std::string> notice;  // set when `hits` is empty

  friend bool operator==(const HitList&, const HitList&) = default;
};

/// Localized notice used when retrieval or answering finds nothing.
std::string_view no_answer_notice() noexcept;

/// Term postings over the repository. Documents are the records in id
/// order; each document also remembers its leaf.
class InvertedIndex {
 public:
  struct Posting {
    std::uint32_t doc;
    std::uint32_t tf;

    friend bool operator==(const Posting&, const Posting&) = default;
  };

  InvertedIndex() = default;

  /// Records must be sorted by id and filed in `tree`.
  static InvertedIndex build(std::span<const SentenceRecord> records, const Vocabulary& vocab,
                             const CategoryTree& tree);

  std::span<const Posting> postings(TermId term) const;
  std::size_t document_count() const noexcept { return doc_leaf_.size(); }
  /// Documents filed under `leaf`.
  std::size_t leaf_document_count(CategoryTree::NodeId leaf) const;
  CategoryTree::NodeId leaf_of(std::size_t doc) const { return doc_leaf_.at(doc); }
  const std::string& id_of(std::size_t doc) const { return doc_ids_.at(doc); }

  /// Cosine between the query's sparse vector and every candidate sentence
  /// under the routed paths, best first with ties by id; only positive
  /// scores, at most `top_n`. Throws Error(kUsage) when top_n is 0.
  HitList hit_sentences(const FeatureVector& query, std::span<const CategoryPath> paths,
                        const CategoryTree& tree, std::size_t top_n = 5) const;

  friend bool operator==(const InvertedIndex&, const InvertedIndex&) = default;

 private:
  friend struct IndexCodec;

  std::size_t num_terms_ = 0;
  std::vector<std::uint64_t> offsets_;  // num_terms + 1 into postings_
  std::vector<Posting> postings_;
  std::vector<double> doc_norms_;       // L2 norm of each document's tf-idf vector
  std::vector<std::string> doc_ids_;
  std::vector<CategoryTree::NodeId> doc_leaf_;
  std::vector<double> idf_;
};

}  // namespace semsearch
