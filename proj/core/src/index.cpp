#include "semsearch/index.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "semsearch/error.hpp"

namespace semsearch {

std::string_view no_answer_notice() noexcept {
  return "দুঃখিত, এই প্রশ্নের কোনো উত্তর পাওয়া যায়নি।";
}

InvertedIndex InvertedIndex::build(std::span<const SentenceRecord> records, const Vocabulary& vocab,
                                   const CategoryTree& tree) {
  InvertedIndex idx;
  idx.num_terms_ = vocab.size();
  idx.idf_.resize(vocab.size());
  for (TermId t = 0; t < vocab.size(); ++t) idx.idf_[t] = vocab.idf(t);

  std::vector<std::vector<Posting>> lists(vocab.size());
  idx.doc_norms_.reserve(records.size());
  for (std::size_t d = 0; d < records.size(); ++d) {
    const auto& rec = records[d];
    if (d > 0 && !(records[d - 1].id < rec.id)) {
      throw Error(ErrorCode::kInvariant, "index input not sorted by id at '" + rec.id + "'");
    }
    const auto leaf = tree.find(rec.category_path);
    if (!leaf || !tree.is_leaf(*leaf)) {
      throw Error(ErrorCode::kData, "sentence '" + rec.id + "' is not filed under a leaf");
    }
    double norm_sq = 0.0;
    for (const auto& e : rec.features.counts) {
      const auto tf = static_cast<std::uint32_t>(e.weight);
      lists[e.term].push_back({static_cast<std::uint32_t>(d), tf});
      const double w = e.weight * idx.idf_[e.term];
      norm_sq += w * w;
    }
    idx.doc_norms_.push_back(std::sqrt(norm_sq));
    idx.doc_ids_.push_back(rec.id);
    idx.doc_leaf_.push_back(*leaf);
  }
  idx.offsets_.reserve(lists.size() + 1);
  idx.offsets_.push_back(0);
  for (auto& list : lists) {
    idx.postings_.insert(idx.postings_.end(), list.begin(), list.end());
    idx.offsets_.push_back(idx.postings_.size());
  }
  return idx;
}

std::span<const InvertedIndex::Posting> InvertedIndex::postings(TermId term) const {
  if (term >= num_terms_) return {};
  return std::span<const Posting>(postings_).subspan(offsets_[term],
                                                     offsets_[term + 1] - offsets_[term]);
}

std::size_t InvertedIndex::leaf_document_count(CategoryTree::NodeId leaf) const {
  return static_cast<std::size_t>(std::count(doc_leaf_.begin(), doc_leaf_.end(), leaf));
}

HitList InvertedIndex::hit_sentences(const FeatureVector& query,
                                     std::span<const CategoryPath> paths,
                                     const CategoryTree& tree, std::size_t top_n) const {
  if (top_n == 0) throw Error(ErrorCode::kUsage, "top_n must be at least 1");
  std::vector<bool> allowed(tree.size(), false);
  for (const auto& path : paths) {
    const auto node = tree.find(path);
    if (!node) throw Error(ErrorCode::kData, "routed path '" + path_key(path) + "' is not in the tree");
    for (auto leaf : tree.leaves_under(*node)) allowed[leaf] = true;
  }

  std::map<std::uint32_t, double> acc;
  for (const auto& q : query.sparse) {
    if (q.term >= num_terms_) continue;
    for (const Posting& p : postings(q.term)) {
      if (!allowed[doc_leaf_[p.doc]]) continue;
      acc[p.doc] += q.weight * static_cast<double>(p.tf) * idf_[q.term];
    }
  }
  HitList out;
  for (const auto& [doc, dot] : acc) {
    if (doc_norms_[doc] <= 0.0) continue;
    const double score = std::clamp(dot / doc_norms_[doc], 0.0, 1.0);
    if (score > 0.0) out.hits.push_back({doc, doc_ids_[doc], score});
  }
  std::sort(out.hits.begin(), out.hits.end(), [](const Hit& a, const Hit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  if (out.hits.size() > top_n) out.hits.resize(top_n);
  if (out.hits.empty()) out.notice = std::string(no_answer_notice());
  return out;
}

}  // namespace semsearch
