#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semsearch/classifier.hpp"

namespace semsearch {

/// Seeded shuffle of 0..n-1 cut into k folds whose sizes differ by at most
/// one (the first n % k folds get the extra index). Throws Error(kUsage)
/// unless 2 <= k <= n.
std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k, std::uint64_t seed);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Train size floor(n * pct / 100). Unshuffled, train is the prefix.
/// Throws Error(kUsage) when pct is outside (0, 100) or either side is empty.
Split percentage_split(std::size_t n, double pct, std::uint64_t seed, bool shuffle);

/// Train and test on everything (evaluation on the training set).
Split resubstitution_split(std::size_t n);

/// K x K counts, rows actual, columns predicted.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::size_t k) : k_(k), cells_(k * k, 0) {}

  std::size_t size() const noexcept { return k_; }
  std::uint64_t at(std::size_t actual, std::size_t predicted) const {
    return cells_.at(actual * k_ + predicted);
  }
  void add(std::size_t actual, std::size_t predicted, std::uint64_t n = 1);
  std::uint64_t total() const;
  std::uint64_t trace() const;
  std::uint64_t row_sum(std::size_t actual) const;
  std::uint64_t col_sum(std::size_t predicted) const;
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);

  static ConfusionMatrix from_rows(const std::vector<std::vector<std::uint64_t>>& rows);

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t k_ = 0;
  std::vector<std::uint64_t> cells_;
};

/// Throws Error(kUsage) on a length mismatch, empty input or a label >= k.
ConfusionMatrix confusion(std::span<const CategoryIndex> predicted,
                          std::span<const CategoryIndex> truth, std::size_t k);

struct EvalReport {
  std::vector<std::string> categories;
  std::size_t n_instances = 0;
  double accuracy = 0.0;
  std::optional<double> kappa;  // absent when chance agreement is 1
  std::optional<double> mae;    // absent without per-instance distributions
  std::optional<double> rmse;
  std::optional<double> rae;  // absent when the prior baseline makes no error
  std::optional<double> rrse;
  std::vector<double> precision;
  std::vector<double> recall;
  ConfusionMatrix confusion;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// Accuracy, kappa, per-category precision and recall from the matrix.
/// With `proba`, MAE and RMSE compare each distribution to the one-hot
/// truth (normalized by N * K), and RAE/RRSE divide them by the errors of
/// always predicting `prior` (default: the label frequencies of `truth`).
EvalReport compute_metrics(const ConfusionMatrix& matrix, std::span<const CategoryIndex> truth,
                           std::optional<std::span<const CategoryDistribution>> proba = std::nullopt,
                           std::optional<std::span<const double>> prior = std::nullopt);

/// Unweighted mean of scalar metrics over the reports that carry them;
/// confusion matrices and instance counts are summed.
EvalReport average_reports(std::span<const EvalReport> reports);

using Predictor = std::function<CategoryDistribution(const FeatureVector&)>;
using TrainFn = std::function<Predictor(const Dataset&)>;

struct InstancePrediction {
  std::size_t index = 0;  // into the evaluated dataset
  std::size_t fold = 0;
  CategoryIndex truth = 0;
  CategoryIndex predicted = 0;
  CategoryDistribution proba;
};

/// Trains on `split.train`, scores `split.test`. The prior baseline is the
/// training label distribution.
EvalReport evaluate_split(const TrainFn& train, const Dataset& data, const Split& split,
                          std::vector<InstancePrediction>* predictions = nullptr);

struct CrossValidation {
  EvalReport average;
  std::vector<EvalReport> folds;
  std::vector<InstancePrediction> predictions;  // every instance once, fold order
  std::uint64_t seed_used = 0;
};

/// k-fold cross-validation. Seeds seed, seed+1, ... are tried (10 at most)
/// until every training fold holds every category; otherwise throws
/// Error(kData) naming the fold and the missing category.
CrossValidation cross_validate(const TrainFn& train, const Dataset& data, std::size_t k,
                               std::uint64_t seed);

/// JSON with a fixed key order; numbers printed with 17 significant digits.
std::string to_json(const EvalReport& report);
/// Aligned plain-text table followed by the confusion matrix.
std::string to_text(const EvalReport& report);

}  // namespace semsearch
