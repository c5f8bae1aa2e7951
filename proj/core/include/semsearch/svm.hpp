#pragma once

#include <vector>

#include "semsearch/classifier.hpp"

namespace semsearch {

namespace detail {
struct ModelCodec;
}

struct SvmOptions {
  double C = 1.0;
  double tol = 1e-3;
  int max_passes = 10;
};

/// Linear SVM, one binary machine per unordered category pair. Inputs are
/// term presence (0/1) followed by dense features min-max scaled with the
/// training ranges.
class SvmModel {
 public:
  struct BinaryMachine {
    CategoryIndex positive = 0;  // label +1
    CategoryIndex negative = 0;  // label -1
    std::vector<double> weights;
    double bias = 0.0;
    std::vector<std::size_t> examples;  // training indices used by this pair
    std::vector<double> alphas;         // parallel to `examples`
  };

  /// Softmax of the pairwise vote counts. Plain vote fractions cap the
  /// winner at 2/K, below the ensemble's NULL floor once K exceeds 5.
  CategoryDistribution predict_proba(const FeatureVector& fv) const;

  /// Per-category count of pairwise wins.
  std::vector<int> votes(const FeatureVector& fv) const;

  /// w.x + b for one machine; positive means the machine's positive class.
  double decision_value(std::size_t machine, const FeatureVector& fv) const;

  /// The vector fed to the machines (presence block then scaled dense).
  std::vector<double> encode(const FeatureVector& fv) const;

  const std::vector<BinaryMachine>& machines() const noexcept { return machines_; }
  const std::vector<std::string>& categories() const noexcept { return categories_; }
  const FeatureSchema& schema() const noexcept { return schema_; }
  const SvmOptions& options() const noexcept { return options_; }

 private:
  friend SvmModel train_svm_smo(const Dataset&, const SvmOptions&);
  friend struct detail::ModelCodec;

  std::vector<std::string> categories_;
  FeatureSchema schema_;
  SvmOptions options_;
  std::vector<double> dense_min_;
  std::vector<double> dense_range_;  // 0 marks a constant column
  std::vector<BinaryMachine> machines_;
};

/// Throws Error(kData) with fewer than two categories or a category
/// without examples, Error(kUsage) for a non-positive C or tol.
SvmModel train_svm_smo(const Dataset& data, const SvmOptions& options = {});

}  // namespace semsearch
