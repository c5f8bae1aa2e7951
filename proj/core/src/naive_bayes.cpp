#include "semsearch/naive_bayes.hpp"

#include <algorithm>
#include <cmath>

#include "semsearch/error.hpp"

namespace semsearch {
namespace {

// Quartile cut points of one dense column: the smallest observed value
// whose empirical CDF reaches q. Depends only on the empirical
// distribution, so duplicating the data leaves the edges unchanged.
std::vector<double> quartile_edges(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  std::vector<double> edges;
  for (std::size_t q = 1; q < NaiveBayesModel::kBins; ++q) {
    const double rank = std::ceil(static_cast<double>(q) * n / NaiveBayesModel::kBins);
    const auto idx = static_cast<std::size_t>(std::max(rank, 1.0)) - 1;
    edges.push_back(values[idx]);
  }
  return edges;
}

}  // namespace

std::size_t NaiveBayesModel::bin_of(std::size_t feature, double value) const {
  const auto first = bin_edges_.begin() + static_cast<std::ptrdiff_t>(feature * (kBins - 1));
  const auto last = first + static_cast<std::ptrdiff_t>(kBins - 1);
  return static_cast<std::size_t>(std::lower_bound(first, last, value) - first);
}

double NaiveBayesModel::prior(CategoryIndex c) const { return std::exp(log_prior_[c]); }

double NaiveBayesModel::term_likelihood(CategoryIndex c, TermId t) const {
  return std::exp(log_likelihood_[c * schema_.num_terms + t]);
}

std::vector<double> NaiveBayesModel::log_scores(const FeatureVector& fv) const {
  schema_.check(fv);
  const std::size_t k = categories_.size();
  const std::size_t v = schema_.num_terms;
  const std::size_t d = schema_.dense_size;
  std::vector<double> scores(log_prior_);
  for (std::size_t c = 0; c < k; ++c) {
    for (const auto& e : fv.counts) scores[c] += e.weight * log_likelihood_[c * v + e.term];
    for (std::size_t j = 0; j < d; ++j) {
      scores[c] += log_bin_likelihood_[(c * d + j) * kBins + bin_of(j, fv.dense[j])];
    }
  }
  return scores;
}

CategoryDistribution NaiveBayesModel::predict_proba(const FeatureVector& fv) const {
  return softmax(log_scores(fv));
}

NaiveBayesModel train_naive_bayes(const Dataset& data, const NaiveBayesOptions& options) {
  if (data.examples.empty()) throw Error(ErrorCode::kData, "naive Bayes: no training data");
  if (!(options.alpha > 0.0)) throw Error(ErrorCode::kUsage, "naive Bayes: alpha must be positive");
  data.validate();
  const auto class_counts = data.category_counts();
  for (std::size_t c = 0; c < class_counts.size(); ++c) {
    if (class_counts[c] == 0) {
      throw Error(ErrorCode::kData, "naive Bayes: category '" + data.categories[c] +
                                        "' has no training examples");
    }
  }

  const std::size_t k = data.categories.size();
  const std::size_t v = data.num_terms;
  const std::size_t d = data.dense_size;
  const double n = static_cast<double>(data.examples.size());
  const double alpha = options.alpha;

  NaiveBayesModel m;
  m.categories_ = data.categories;
  m.schema_ = {std::string(kFeatureSchemaVersion), v, d};
  m.options_ = options;

  m.log_prior_.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    m.log_prior_[c] = std::log(static_cast<double>(class_counts[c]) / n);
  }

  std::vector<double> term_mass(k * v, 0.0);
  std::vector<double> total_mass(k, 0.0);
  for (const auto& ex : data.examples) {
    for (const auto& e : ex.features.counts) {
      term_mass[ex.category * v + e.term] += e.weight;
      total_mass[ex.category] += e.weight;
    }
  }
  m.log_likelihood_.resize(k * v);
  for (std::size_t c = 0; c < k; ++c) {
    const double denom = total_mass[c] + alpha * static_cast<double>(v);
    for (std::size_t t = 0; t < v; ++t) {
      m.log_likelihood_[c * v + t] = std::log((term_mass[c * v + t] + alpha) / denom);
    }
  }

  m.bin_edges_.reserve(d * (NaiveBayesModel::kBins - 1));
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<double> column;
    column.reserve(data.examples.size());
    for (const auto& ex : data.examples) column.push_back(ex.features.dense[j]);
    const auto edges = quartile_edges(std::move(column));
    m.bin_edges_.insert(m.bin_edges_.end(), edges.begin(), edges.end());
  }
  constexpr std::size_t bins = NaiveBayesModel::kBins;
  std::vector<double> bin_counts(k * d * bins, 0.0);
  for (const auto& ex : data.examples) {
    for (std::size_t j = 0; j < d; ++j) {
      bin_counts[(ex.category * d + j) * bins + m.bin_of(j, ex.features.dense[j])] += 1.0;
    }
  }
  m.log_bin_likelihood_.resize(k * d * bins);
  for (std::size_t c = 0; c < k; ++c) {
    const double denom = static_cast<double>(class_counts[c]) + alpha * bins;
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t b = 0; b < bins; ++b) {
        const std::size_t idx = (c * d + j) * bins + b;
        m.log_bin_likelihood_[idx] = std::log((bin_counts[idx] + alpha) / denom);
      }
    }
  }
  return m;
}

}  // namespace semsearch
