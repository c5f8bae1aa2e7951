#include "semsearch/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "semsearch/error.hpp"

namespace semsearch {

void Dataset::validate() const {
  if (categories.empty()) throw Error(ErrorCode::kData, "dataset declares no categories");
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    auto fail = [&](const std::string& what) {
      throw Error(ErrorCode::kData, "example " + std::to_string(i) + ": " + what);
    };
    if (ex.category >= categories.size()) fail("label out of range");
    if (ex.features.dense.size() != dense_size) fail("dense feature length mismatch");
    for (double v : ex.features.dense) {
      if (!std::isfinite(v)) fail("non-finite dense feature");
    }
    for (const auto* block : {&ex.features.sparse, &ex.features.counts}) {
      for (std::size_t k = 0; k < block->size(); ++k) {
        const auto& e = (*block)[k];
        if (e.term >= num_terms) fail("term id out of range");
        if (!std::isfinite(e.weight) || e.weight < 0.0) fail("invalid term weight");
        if (k > 0 && (*block)[k - 1].term >= e.term) fail("term ids not increasing");
      }
    }
  }
}

std::vector<std::size_t> Dataset::category_counts() const {
  std::vector<std::size_t> counts(categories.size(), 0);
  for (const auto& ex : examples) ++counts[ex.category];
  return counts;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out{categories, num_terms, dense_size, {}};
  out.examples.reserve(indices.size());
  for (std::size_t i : indices) out.examples.push_back(examples.at(i));
  return out;
}

CategoryIndex CategoryDistribution::argmax() const noexcept {
  CategoryIndex best = 0;
  for (std::size_t i = 1; i < probabilities.size(); ++i) {
    if (probabilities[i] > probabilities[best]) best = i;
  }
  return best;
}

double CategoryDistribution::max() const noexcept {
  return probabilities.empty() ? 0.0 : probabilities[argmax()];
}

std::string_view to_string(ClassifierKind kind) noexcept {
  switch (kind) {
    case ClassifierKind::kNaiveBayes: return "nb";
    case ClassifierKind::kSvm: return "svm";
    case ClassifierKind::kTree: return "tree";
    case ClassifierKind::kMlp: return "mlp";
  }
  return "nb";
}

std::optional<ClassifierKind> parse_classifier_kind(std::string_view name) noexcept {
  for (ClassifierKind kind : kAllClassifierKinds) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

void FeatureSchema::check(const FeatureVector& fv) const {
  if (fv.dense.size() != dense_size) {
    throw Error(ErrorCode::kSchema, "feature vector has " + std::to_string(fv.dense.size()) +
                                        " dense features, model expects " +
                                        std::to_string(dense_size) + " (" + version + ")");
  }
  for (const auto* block : {&fv.sparse, &fv.counts}) {
    if (!block->empty() && block->back().term >= num_terms) {
      throw Error(ErrorCode::kSchema, "term id " + std::to_string(block->back().term) +
                                          " outside the model vocabulary of " +
                                          std::to_string(num_terms));
    }
  }
}

CategoryDistribution softmax(std::span<const double> scores) {
  CategoryDistribution out;
  if (scores.empty()) return out;
  const double top = *std::max_element(scores.begin(), scores.end());
  out.probabilities.reserve(scores.size());
  double total = 0.0;
  for (double s : scores) {
    const double e = std::exp(s - top);
    out.probabilities.push_back(e);
    total += e;
  }
  for (double& p : out.probabilities) p /= total;
  return out;
}

}  // namespace semsearch
