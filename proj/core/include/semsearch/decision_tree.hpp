#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "semsearch/classifier.hpp"

namespace semsearch {

namespace detail {
struct ModelCodec;
}

struct TreeOptions {
  std::size_t min_leaf = 2;
  double confidence = 0.25;  // pruning confidence factor, in (0, 0.5]
  bool prune = true;
};

enum class SplitKind : std::uint8_t {
  kTermPresence,    // right branch: term present
  kDenseThreshold,  // right branch: value > threshold
};

struct SplitCandidate {
  SplitKind kind = SplitKind::kTermPresence;
  std::size_t feature = 0;  // term id or dense index
  double threshold = 0.0;   // dense splits only
  double gain = 0.0;        // bits
  double gain_ratio = 0.0;
};

/// Every admissible binary split of `rows` (both branches hold at least
/// `min_leaf` examples): one presence test per term occurring in some but
/// not all rows, one midpoint test between consecutive distinct values of
/// each dense feature. Terms come first in id order, then dense features.
std::vector<SplitCandidate> enumerate_splits(const Dataset& data,
                                             std::span<const std::size_t> rows,
                                             std::size_t min_leaf);

class TreeModel {
 public:
  struct Node {
    bool leaf = true;
    SplitCandidate split;        // meaningful for interior nodes
    std::int32_t left = -1;      // absent / at or below threshold
    std::int32_t right = -1;     // present / above threshold
    std::vector<double> counts;  // training examples per category reaching the node
  };

  CategoryDistribution predict_proba(const FeatureVector& fv) const;

  /// Index of the leaf `fv` falls into.
  std::size_t leaf_for(const FeatureVector& fv) const;

  const std::vector<Node>& nodes() const noexcept { return nodes_; }  // nodes_[0] is the root
  std::size_t depth() const;
  std::size_t leaf_count() const;

  const std::vector<std::string>& categories() const noexcept { return categories_; }
  const FeatureSchema& schema() const noexcept { return schema_; }
  const TreeOptions& options() const noexcept { return options_; }

 private:
  friend TreeModel train_decision_tree(const Dataset&, const TreeOptions&);
  friend struct detail::ModelCodec;

  std::vector<std::string> categories_;
  FeatureSchema schema_;
  TreeOptions options_;
  std::vector<Node> nodes_;
};

/// Pessimistic extra errors for a leaf with `n` cases and `e` errors at
/// confidence `cf` (upper binomial bound minus observed errors).
double pessimistic_extra_errors(double n, double e, double cf);

/// Gain-ratio induction, then pessimistic-error pruning when enabled.
/// Throws Error(kData) on empty data.
TreeModel train_decision_tree(const Dataset& data, const TreeOptions& options = {});

}  // namespace semsearch
