#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semsearch/category_tree.hpp"
#include "semsearch/model.hpp"

namespace semsearch {

/// One classifier's hard label; an empty category is a NULL prediction.
struct Prediction {
  std::optional<CategoryIndex> category;
  ClassifierKind source = ClassifierKind::kNaiveBayes;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

struct EnsembleConfig {
  double per_classifier_weight = 0.25;
  double win_threshold = 0.50;
  double null_floor = 0.40;

  /// Throws Error(kUsage) unless 4 x weight = 1, the threshold lies in
  /// [0, 1) and the floor in [0, 1].
  void validate() const;
};

enum class VoteRule {
  kMajority,     // one category above the win threshold
  kAllDistinct,  // four different categories, all kept
  kKeepAll,      // no majority: every distinct non-null category kept
  kAllNull,
};

std::string_view to_string(VoteRule rule) noexcept;

struct VoteOutcome {
  /// Descending weight, then ascending category index. Empty iff all_null.
  std::vector<CategoryIndex> winners;
  bool all_null = false;
  VoteRule rule = VoteRule::kAllNull;
  std::map<CategoryIndex, double> weights;  // categories with at least one vote
  double null_weight = 0.0;

  friend bool operator==(const VoteOutcome&, const VoteOutcome&) = default;
};

/// Weighted vote over exactly one prediction per classifier kind.
/// Throws Error(kUsage) otherwise.
VoteOutcome vote(std::span<const Prediction> predictions, const EnsembleConfig& config = {});

/// NULL when the largest probability is strictly below the floor.
Prediction classify_with_null(const CategoryDistribution& proba, ClassifierKind source,
                              const EnsembleConfig& config = {});
Prediction classify_with_null(const Model& model, const FeatureVector& fv,
                              const EnsembleConfig& config = {});

/// Four trained models of one decision node, indexed like kAllClassifierKinds.
using NodeModels = std::array<Model, kClassifierKindCount>;

NodeModels train_node_models(const Dataset& data, const ClassifierOptions& options = {});

/// Models per decision node, keyed by path_key of the node.
using ModelMap = std::map<std::string, NodeModels>;

/// The four models of one node combined: the label is the top winner of
/// the vote, and the distribution is the normalized vote weights. When all
/// four abstain the mean of their distributions is used instead.
class EnsembleClassifier {
 public:
  EnsembleClassifier(NodeModels models, EnsembleConfig config);

  std::array<Prediction, kClassifierKindCount> predictions(const FeatureVector& fv) const;
  VoteOutcome vote(const FeatureVector& fv) const;
  CategoryDistribution predict_proba(const FeatureVector& fv) const;
  CategoryIndex predict(const FeatureVector& fv) const { return predict_proba(fv).argmax(); }

  const NodeModels& models() const noexcept { return models_; }

 private:
  NodeModels models_;
  EnsembleConfig config_;
};

struct RouteStep {
  CategoryPath node;
  std::array<Prediction, kClassifierKindCount> predictions;
  VoteOutcome outcome;
};

struct RouteResult {
  /// Sorted, unique. A path ending above the leaves (the root included)
  /// means the vote there was all NULL and its whole subtree is searched.
  std::vector<CategoryPath> paths;
  std::vector<RouteStep> audit;  // breadth-first order
};

/// Breadth-wise descent from the root. Single-child nodes pass through.
/// Throws Error(kData) naming the node when a decision node has no models,
/// or Error(kSchema) when a node's models disagree with the tree.
RouteResult route_recursive(const FeatureVector& fv, const CategoryTree& tree,
                            const ModelMap& models, const EnsembleConfig& config = {});

}  // namespace semsearch
