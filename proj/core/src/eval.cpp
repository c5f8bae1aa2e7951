#include "semsearch/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "semsearch/error.hpp"
#include "semsearch/random.hpp"

namespace semsearch {

std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2 || k > n) {
    throw Error(ErrorCode::kUsage, "k-fold needs 2 <= k <= n (k=" + std::to_string(k) +
                                       ", n=" + std::to_string(n) + ")");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t at = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = n / k + (f < n % k ? 1 : 0);
    folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(at),
                    order.begin() + static_cast<std::ptrdiff_t>(at + size));
    at += size;
  }
  return folds;
}

Split percentage_split(std::size_t n, double pct, std::uint64_t seed, bool shuffle) {
  if (!(pct > 0.0 && pct < 100.0)) {
    throw Error(ErrorCode::kUsage, "split percentage must lie strictly between 0 and 100");
  }
  // The epsilon keeps exact products such as 100 * 70 / 100 from flooring down.
  const auto train_size =
      static_cast<std::size_t>(std::floor(static_cast<double>(n) * pct / 100.0 + 1e-9));
  if (train_size == 0 || train_size >= n) {
    throw Error(ErrorCode::kUsage, "a " + std::to_string(pct) + "% split of " +
                                       std::to_string(n) + " instances leaves one side empty");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (shuffle) {
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(order));
  }
  Split s;
  s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_size));
  s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(train_size), order.end());
  return s;
}

Split resubstitution_split(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kUsage, "cannot evaluate an empty dataset");
  Split s;
  s.train.resize(n);
  std::iota(s.train.begin(), s.train.end(), 0);
  s.test = s.train;
  return s;
}

void ConfusionMatrix::add(std::size_t actual, std::size_t predicted, std::uint64_t n) {
  if (actual >= k_ || predicted >= k_) throw Error(ErrorCode::kUsage, "confusion label out of range");
  cells_[actual * k_ + predicted] += n;
}

std::uint64_t ConfusionMatrix::total() const {
  return std::accumulate(cells_.begin(), cells_.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < k_; ++i) t += cells_[i * k_ + i];
  return t;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t actual) const {
  std::uint64_t s = 0;
  for (std::size_t p = 0; p < k_; ++p) s += cells_.at(actual * k_ + p);
  return s;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t predicted) const {
  std::uint64_t s = 0;
  for (std::size_t a = 0; a < k_; ++a) s += cells_.at(a * k_ + predicted);
  return s;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.k_ != k_) throw Error(ErrorCode::kUsage, "adding confusion matrices of different sizes");
  for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i] += other.cells_[i];
  return *this;
}

ConfusionMatrix ConfusionMatrix::from_rows(const std::vector<std::vector<std::uint64_t>>& rows) {
  ConfusionMatrix m(rows.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    if (rows[a].size() != rows.size()) throw Error(ErrorCode::kUsage, "confusion matrix must be square");
    for (std::size_t p = 0; p < rows.size(); ++p) m.cells_[a * m.k_ + p] = rows[a][p];
  }
  return m;
}

ConfusionMatrix confusion(std::span<const CategoryIndex> predicted,
                          std::span<const CategoryIndex> truth, std::size_t k) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorCode::kUsage, "confusion: " + std::to_string(predicted.size()) +
                                       " predictions for " + std::to_string(truth.size()) +
                                       " labels");
  }
  if (truth.empty()) throw Error(ErrorCode::kUsage, "confusion: no instances");
  ConfusionMatrix m(k);
  for (std::size_t i = 0; i < truth.size(); ++i) m.add(truth[i], predicted[i]);
  return m;
}

namespace {

struct ErrorSums {
  double abs = 0.0;
  double sq = 0.0;
};

ErrorSums distribution_errors(std::span<const double> p, CategoryIndex truth) {
  ErrorSums e;
  for (std::size_t c = 0; c < p.size(); ++c) {
    const double d = p[c] - (c == truth ? 1.0 : 0.0);
    e.abs += std::abs(d);
    e.sq += d * d;
  }
  return e;
}

}  // namespace

EvalReport compute_metrics(const ConfusionMatrix& matrix, std::span<const CategoryIndex> truth,
                           std::optional<std::span<const CategoryDistribution>> proba,
                           std::optional<std::span<const double>> prior) {
  const std::size_t k = matrix.size();
  const std::uint64_t total = matrix.total();
  if (total == 0) throw Error(ErrorCode::kUsage, "metrics of an empty confusion matrix");
  EvalReport r;
  r.n_instances = total;
  r.confusion = matrix;
  const double n = static_cast<double>(total);
  r.accuracy = static_cast<double>(matrix.trace()) / n;

  double pe = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    pe += static_cast<double>(matrix.row_sum(c)) * static_cast<double>(matrix.col_sum(c));
  }
  pe /= n * n;
  if (pe < 1.0) r.kappa = (r.accuracy - pe) / (1.0 - pe);

  r.precision.resize(k);
  r.recall.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    const auto col = matrix.col_sum(c);
    const auto row = matrix.row_sum(c);
    r.precision[c] = col == 0 ? 0.0 : static_cast<double>(matrix.at(c, c)) / static_cast<double>(col);
    r.recall[c] = row == 0 ? 0.0 : static_cast<double>(matrix.at(c, c)) / static_cast<double>(row);
  }

  if (proba) {
    if (proba->size() != truth.size() || truth.size() != total) {
      throw Error(ErrorCode::kUsage, "metrics: need one distribution and one label per instance");
    }
    std::vector<double> base(k, 0.0);
    if (prior) {
      if (prior->size() != k) throw Error(ErrorCode::kUsage, "metrics: prior has the wrong size");
      base.assign(prior->begin(), prior->end());
    } else {
      for (CategoryIndex t : truth) base.at(t) += 1.0 / n;
    }
    ErrorSums model;
    ErrorSums baseline;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const auto& p = (*proba)[i].probabilities;
      if (p.size() != k) throw Error(ErrorCode::kUsage, "metrics: distribution has the wrong size");
      const auto e = distribution_errors(p, truth[i]);
      const auto b = distribution_errors(base, truth[i]);
      model.abs += e.abs;
      model.sq += e.sq;
      baseline.abs += b.abs;
      baseline.sq += b.sq;
    }
    const double nk = n * static_cast<double>(k);
    r.mae = model.abs / nk;
    r.rmse = std::sqrt(model.sq / nk);
    if (baseline.abs > 0.0) r.rae = model.abs / baseline.abs;
    if (baseline.sq > 0.0) r.rrse = std::sqrt(model.sq / baseline.sq);
  }
  return r;
}

EvalReport average_reports(std::span<const EvalReport> reports) {
  if (reports.empty()) throw Error(ErrorCode::kUsage, "no reports to average");
  EvalReport avg;
  avg.categories = reports.front().categories;
  const std::size_t k = reports.front().confusion.size();
  avg.confusion = ConfusionMatrix(k);
  avg.precision.assign(k, 0.0);
  avg.recall.assign(k, 0.0);
  auto mean_of = [&](std::optional<double> EvalReport::*field) -> std::optional<double> {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& r : reports) {
      if (r.*field) {
        sum += *(r.*field);
        ++count;
      }
    }
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
  };
  const double m = static_cast<double>(reports.size());
  for (const auto& r : reports) {
    avg.n_instances += r.n_instances;
    avg.accuracy += r.accuracy / m;
    avg.confusion += r.confusion;
    for (std::size_t c = 0; c < k; ++c) {
      avg.precision[c] += r.precision.at(c) / m;
      avg.recall[c] += r.recall.at(c) / m;
    }
  }
  avg.kappa = mean_of(&EvalReport::kappa);
  avg.mae = mean_of(&EvalReport::mae);
  avg.rmse = mean_of(&EvalReport::rmse);
  avg.rae = mean_of(&EvalReport::rae);
  avg.rrse = mean_of(&EvalReport::rrse);
  return avg;
}

EvalReport evaluate_split(const TrainFn& train, const Dataset& data, const Split& split,
                          std::vector<InstancePrediction>* predictions) {
  if (split.test.empty()) throw Error(ErrorCode::kUsage, "evaluation split has no test instances");
  const Dataset train_data = data.subset(split.train);
  const Predictor predictor = train(train_data);
  const std::size_t k = data.categories.size();

  std::vector<double> prior(k, 0.0);
  const auto counts = train_data.category_counts();
  for (std::size_t c = 0; c < k; ++c) {
    prior[c] = static_cast<double>(counts[c]) / static_cast<double>(train_data.examples.size());
  }
  std::vector<CategoryIndex> truth;
  std::vector<CategoryIndex> predicted;
  std::vector<CategoryDistribution> dists;
  for (std::size_t i : split.test) {
    const auto& ex = data.examples.at(i);
    auto dist = predictor(ex.features);
    if (dist.size() != k) {
      throw Error(ErrorCode::kInvariant, "predictor returned " + std::to_string(dist.size()) +
                                             " probabilities for " + std::to_string(k) +
                                             " categories");
    }
    truth.push_back(ex.category);
    predicted.push_back(dist.argmax());
    if (predictions != nullptr) predictions->push_back({i, 0, ex.category, dist.argmax(), dist});
    dists.push_back(std::move(dist));
  }
  EvalReport r = compute_metrics(confusion(predicted, truth, k), truth,
                                 std::span<const CategoryDistribution>(dists),
                                 std::span<const double>(prior));
  r.categories = data.categories;
  return r;
}

CrossValidation cross_validate(const TrainFn& train, const Dataset& data, std::size_t k,
                               std::uint64_t seed) {
  constexpr int kAttempts = 10;
  const std::size_t n = data.examples.size();
  std::vector<std::vector<std::size_t>> folds;
  std::string problem;
  std::uint64_t used = seed;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    used = seed + static_cast<std::uint64_t>(attempt);
    folds = kfold_split(n, k, used);
    problem.clear();
    for (std::size_t f = 0; f < folds.size() && problem.empty(); ++f) {
      std::vector<std::size_t> held(data.categories.size(), 0);
      for (std::size_t i : folds[f]) ++held[data.examples[i].category];
      const auto total = data.category_counts();
      for (std::size_t c = 0; c < total.size(); ++c) {
        if (total[c] == held[c]) {
          problem = "training set of fold " + std::to_string(f + 1) + " lacks category '" +
                    data.categories[c] + "'";
          break;
        }
      }
    }
    if (problem.empty()) break;
  }
  if (!problem.empty()) {
    throw Error(ErrorCode::kData, "cross-validation: " + problem + " after " +
                                      std::to_string(kAttempts) + " seeds");
  }

  CrossValidation cv;
  cv.seed_used = used;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    Split split;
    split.test = folds[f];
    for (std::size_t g = 0; g < folds.size(); ++g) {
      if (g != f) split.train.insert(split.train.end(), folds[g].begin(), folds[g].end());
    }
    std::sort(split.train.begin(), split.train.end());
    const std::size_t first = cv.predictions.size();
    cv.folds.push_back(evaluate_split(train, data, split, &cv.predictions));
    for (std::size_t i = first; i < cv.predictions.size(); ++i) cv.predictions[i].fold = f;
  }
  cv.average = average_reports(cv.folds);
  return cv;
}

}  // namespace semsearch
