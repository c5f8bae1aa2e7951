#pragma once

#include <vector>

#include "semsearch/classifier.hpp"

namespace semsearch {

namespace detail {
struct ModelCodec;
}

struct NaiveBayesOptions {
  double alpha = 1.0;  // Laplace smoothing
};

/// Multinomial naive Bayes over raw term counts, with each dense feature
/// discretized into quartile bins learned from the training data.
class NaiveBayesModel {
 public:
  static constexpr std::size_t kBins = 4;

  CategoryDistribution predict_proba(const FeatureVector& fv) const;

  /// Unnormalized log posterior per category.
  std::vector<double> log_scores(const FeatureVector& fv) const;

  double prior(CategoryIndex c) const;

  /// p(term | category) in probability space.
  double term_likelihood(CategoryIndex c, TermId t) const;

  const std::vector<std::string>& categories() const noexcept { return categories_; }
  const FeatureSchema& schema() const noexcept { return schema_; }
  const NaiveBayesOptions& options() const noexcept { return options_; }
  std::size_t bin_of(std::size_t feature, double value) const;

 private:
  friend NaiveBayesModel train_naive_bayes(const Dataset&, const NaiveBayesOptions&);
  friend struct detail::ModelCodec;

  std::vector<std::string> categories_;
  FeatureSchema schema_;
  NaiveBayesOptions options_;
  std::vector<double> log_prior_;          // K
  std::vector<double> log_likelihood_;     // K x num_terms
  std::vector<double> bin_edges_;          // dense_size x (kBins - 1)
  std::vector<double> log_bin_likelihood_; // K x dense_size x kBins
};

/// Throws Error(kData) on empty data or a declared category without
/// examples.
NaiveBayesModel train_naive_bayes(const Dataset& data, const NaiveBayesOptions& options = {});

}  // namespace semsearch
