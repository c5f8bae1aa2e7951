#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semsearch/ensemble.hpp"
#include "semsearch/eval.hpp"

namespace semsearch {

/// What an evaluation trains: one classifier kind, or the four-way vote
/// (nullopt).
using EvalSubject = std::optional<ClassifierKind>;

/// Accepts the classifier names plus "ensemble". Throws Error(kUsage).
EvalSubject parse_eval_subject(std::string_view name);
std::string_view to_string(const EvalSubject& subject) noexcept;

/// Training function for the evaluation harness. The ensemble predicts the
/// top vote winner.
TrainFn make_train_fn(const EvalSubject& subject, const ClassifierOptions& options = {},
                      const EnsembleConfig& ensemble = {});

/// One JSON object per line: fold, id, truth, predicted and the
/// distribution, keyed by category name. `ids` are indexed like the
/// evaluated dataset.
std::string predictions_to_jsonl(const std::vector<InstancePrediction>& predictions,
                                 const Dataset& data, const std::vector<std::string>& ids);

}  // namespace semsearch
