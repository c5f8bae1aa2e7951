#include "semsearch/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "semsearch/error.hpp"

namespace semsearch {

void EnsembleConfig::validate() const {
  if (std::abs(4.0 * per_classifier_weight - 1.0) > 1e-12) {
    throw Error(ErrorCode::kUsage, "ensemble.weight must be 0.25 (four equal votes)");
  }
  if (!(win_threshold >= 0.0 && win_threshold < 1.0)) {
    throw Error(ErrorCode::kUsage, "ensemble.win_threshold must lie in [0, 1)");
  }
  if (!(null_floor >= 0.0 && null_floor <= 1.0)) {
    throw Error(ErrorCode::kUsage, "ensemble.null_floor must lie in [0, 1]");
  }
}

std::string_view to_string(VoteRule rule) noexcept {
  switch (rule) {
    case VoteRule::kMajority: return "majority";
    case VoteRule::kAllDistinct: return "all-distinct";
    case VoteRule::kKeepAll: return "keep-all";
    case VoteRule::kAllNull: return "all-null";
  }
  return "all-null";
}

VoteOutcome vote(std::span<const Prediction> predictions, const EnsembleConfig& config) {
  if (predictions.size() != kClassifierKindCount) {
    throw Error(ErrorCode::kUsage, "vote needs exactly 4 predictions, got " +
                                       std::to_string(predictions.size()));
  }
  std::array<bool, kClassifierKindCount> seen{};
  std::map<CategoryIndex, int> counts;
  int nulls = 0;
  for (const auto& p : predictions) {
    auto& flag = seen[static_cast<std::size_t>(p.source)];
    if (flag) {
      throw Error(ErrorCode::kUsage,
                  "vote received two predictions from " + std::string(to_string(p.source)));
    }
    flag = true;
    if (p.category) {
      ++counts[*p.category];
    } else {
      ++nulls;
    }
  }

  VoteOutcome out;
  out.null_weight = nulls * config.per_classifier_weight;
  for (const auto& [c, n] : counts) out.weights[c] = n * config.per_classifier_weight;
  if (counts.empty()) {
    out.all_null = true;
    out.rule = VoteRule::kAllNull;
    return out;
  }
  std::vector<std::pair<int, CategoryIndex>> ranked;
  for (const auto& [c, n] : counts) ranked.emplace_back(n, c);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });

  if (out.weights[ranked.front().second] > config.win_threshold) {
    out.rule = VoteRule::kMajority;
    out.winners = {ranked.front().second};
    return out;
  }
  out.rule = counts.size() == kClassifierKindCount ? VoteRule::kAllDistinct : VoteRule::kKeepAll;
  for (const auto& [n, c] : ranked) out.winners.push_back(c);
  return out;
}

Prediction classify_with_null(const CategoryDistribution& proba, ClassifierKind source,
                              const EnsembleConfig& config) {
  Prediction p;
  p.source = source;
  if (proba.size() > 0 && !(proba.max() < config.null_floor)) p.category = proba.argmax();
  return p;
}

Prediction classify_with_null(const Model& model, const FeatureVector& fv,
                              const EnsembleConfig& config) {
  return classify_with_null(predict_proba(model, fv), kind_of(model), config);
}

NodeModels train_node_models(const Dataset& data, const ClassifierOptions& options) {
  return {train_model(ClassifierKind::kNaiveBayes, data, options),
          train_model(ClassifierKind::kSvm, data, options),
          train_model(ClassifierKind::kTree, data, options),
          train_model(ClassifierKind::kMlp, data, options)};
}

EnsembleClassifier::EnsembleClassifier(NodeModels models, EnsembleConfig config)
    : models_(std::move(models)), config_(config) {
  config_.validate();
  for (std::size_t i = 0; i < models_.size(); ++i) {
    if (kind_of(models_[i]) != kAllClassifierKinds[i]) {
      throw Error(ErrorCode::kInvariant, "ensemble models are not in classifier-kind order");
    }
    if (categories_of(models_[i]) != categories_of(models_[0])) {
      throw Error(ErrorCode::kInvariant, "ensemble models disagree on categories");
    }
  }
}

std::array<Prediction, kClassifierKindCount> EnsembleClassifier::predictions(
    const FeatureVector& fv) const {
  std::array<Prediction, kClassifierKindCount> out;
  for (std::size_t i = 0; i < models_.size(); ++i) {
    out[i] = classify_with_null(models_[i], fv, config_);
  }
  return out;
}

VoteOutcome EnsembleClassifier::vote(const FeatureVector& fv) const {
  return semsearch::vote(predictions(fv), config_);
}

CategoryDistribution EnsembleClassifier::predict_proba(const FeatureVector& fv) const {
  const std::size_t k = categories_of(models_[0]).size();
  CategoryDistribution out;
  out.probabilities.assign(k, 0.0);
  std::array<CategoryDistribution, kClassifierKindCount> dists;
  std::array<Prediction, kClassifierKindCount> preds;
  for (std::size_t i = 0; i < models_.size(); ++i) {
    dists[i] = semsearch::predict_proba(models_[i], fv);
    preds[i] = classify_with_null(dists[i], kAllClassifierKinds[i], config_);
  }
  const VoteOutcome outcome = semsearch::vote(preds, config_);
  if (outcome.all_null) {
    for (const auto& d : dists) {
      for (std::size_t c = 0; c < k; ++c) out.probabilities[c] += d[c] / dists.size();
    }
    return out;
  }
  const double total = 1.0 - outcome.null_weight;
  for (const auto& [c, w] : outcome.weights) out.probabilities[c] = w / total;
  return out;
}

RouteResult route_recursive(const FeatureVector& fv, const CategoryTree& tree,
                            const ModelMap& models, const EnsembleConfig& config) {
  config.validate();
  RouteResult result;
  std::deque<CategoryTree::NodeId> frontier{CategoryTree::kRoot};
  while (!frontier.empty()) {
    CategoryTree::NodeId at = frontier.front();
    frontier.pop_front();
    while (tree.node(at).children.size() == 1) at = tree.node(at).children.front();
    if (tree.is_leaf(at)) {
      result.paths.push_back(tree.path_of(at));
      continue;
    }
    const std::string key = tree.key_of(at);
    const auto found = models.find(key);
    if (found == models.end()) {
      throw Error(ErrorCode::kData,
                  "no trained models for category node '" + (key.empty() ? "<root>" : key) + "'");
    }
    const auto children = tree.child_names(at);
    for (const Model& m : found->second) {
      if (categories_of(m) != children) {
        throw Error(ErrorCode::kSchema, "models at node '" + key +
                                            "' were trained for different subcategories");
      }
    }
    RouteStep step;
    step.node = tree.path_of(at);
    for (std::size_t i = 0; i < kClassifierKindCount; ++i) {
      step.predictions[i] = classify_with_null(found->second[i], fv, config);
    }
    step.outcome = vote(step.predictions, config);
    if (step.outcome.all_null) {
      result.paths.push_back(step.node);
    } else {
      for (CategoryIndex c : step.outcome.winners) {
        frontier.push_back(tree.node(at).children.at(c));
      }
    }
    result.audit.push_back(std::move(step));
  }
  std::sort(result.paths.begin(), result.paths.end());
  result.paths.erase(std::unique(result.paths.begin(), result.paths.end()), result.paths.end());
  return result;
}

}  // namespace semsearch
