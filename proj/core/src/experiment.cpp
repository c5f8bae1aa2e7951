#include "semsearch/experiment.hpp"

#include <memory>

#include "json.hpp"
#include "semsearch/error.hpp"

namespace semsearch {

EvalSubject parse_eval_subject(std::string_view name) {
  if (name == "ensemble") return std::nullopt;
  if (const auto kind = parse_classifier_kind(name)) return *kind;
  throw Error(ErrorCode::kUsage, "unknown classifier '" + std::string(name) +
                                     "' (expected nb, svm, tree, mlp or ensemble)");
}

std::string_view to_string(const EvalSubject& subject) noexcept {
  return subject ? to_string(*subject) : std::string_view("ensemble");
}

TrainFn make_train_fn(const EvalSubject& subject, const ClassifierOptions& options,
                      const EnsembleConfig& ensemble) {
  if (subject) {
    const ClassifierKind kind = *subject;
    return [kind, options](const Dataset& data) -> Predictor {
      auto model = std::make_shared<const Model>(train_model(kind, data, options));
      return [model](const FeatureVector& fv) { return predict_proba(*model, fv); };
    };
  }
  ensemble.validate();
  return [options, ensemble](const Dataset& data) -> Predictor {
    auto combined =
        std::make_shared<const EnsembleClassifier>(train_node_models(data, options), ensemble);
    return [combined](const FeatureVector& fv) { return combined->predict_proba(fv); };
  };
}

std::string predictions_to_jsonl(const std::vector<InstancePrediction>& predictions,
                                 const Dataset& data, const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& p : predictions) {
    nlohmann::ordered_json j;
    j["fold"] = p.fold;
    j["id"] = p.index < ids.size() ? ids[p.index] : std::to_string(p.index);
    j["truth"] = data.categories.at(p.truth);
    j["predicted"] = data.categories.at(p.predicted);
    nlohmann::ordered_json dist;
    for (std::size_t c = 0; c < p.proba.size(); ++c) dist[data.categories.at(c)] = p.proba[c];
    j["proba"] = dist;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace semsearch
