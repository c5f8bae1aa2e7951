#pragma once

#include <cstdint>
#include <vector>

#include "semsearch/classifier.hpp"

namespace semsearch {

namespace detail {
struct ModelCodec;
}

struct MlpOptions {
  std::size_t hidden = 0;  // 0 = ceil((inputs + categories) / 2), at most 64
  double lr = 0.3;
  double momentum = 0.2;
  int epochs = 500;
  std::size_t top_k = 500;
  std::uint64_t seed = 1;
};

/// One-hidden-layer sigmoid network. `weights` holds the input-to-hidden
/// matrix (hidden rows of inputs + 1, bias last) followed by the
/// hidden-to-output matrix (outputs rows of hidden + 1, bias last).
struct MlpParameters {
  std::size_t inputs = 0;
  std::size_t hidden = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;

  std::size_t hidden_offset(std::size_t h) const { return h * (inputs + 1); }
  std::size_t output_offset(std::size_t o) const {
    return hidden * (inputs + 1) + o * (hidden + 1);
  }
  std::size_t size() const { return hidden * (inputs + 1) + outputs * (hidden + 1); }

  friend bool operator==(const MlpParameters&, const MlpParameters&) = default;
};

struct MlpSample {
  std::vector<double> x;
  std::size_t label = 0;
};

struct MlpActivations {
  std::vector<double> hidden;
  std::vector<double> output;
};

MlpActivations mlp_forward(const MlpParameters& p, const std::vector<double>& x);

/// Mean over samples of 0.5 * sum over outputs of (output - one_hot)^2.
double mlp_loss(const MlpParameters& p, const std::vector<MlpSample>& samples);

/// Gradient of mlp_loss with respect to `p.weights`, same layout.
std::vector<double> mlp_gradient(const MlpParameters& p, const std::vector<MlpSample>& samples);

/// Mean squared error over samples and outputs.
double mlp_mse(const MlpParameters& p, const std::vector<MlpSample>& samples);

class MlpModel {
 public:
  CategoryDistribution predict_proba(const FeatureVector& fv) const;

  /// Network input for `fv`: selected term weights, then scaled dense features.
  std::vector<double> encode(const FeatureVector& fv) const;

  const MlpParameters& parameters() const noexcept { return params_; }
  const std::vector<TermId>& selected_terms() const noexcept { return selected_terms_; }
  const std::vector<std::string>& categories() const noexcept { return categories_; }
  const FeatureSchema& schema() const noexcept { return schema_; }
  const MlpOptions& options() const noexcept { return options_; }

 private:
  friend MlpModel train_mlp(const Dataset&, const MlpOptions&, std::vector<double>*);
  friend struct detail::ModelCodec;

  std::vector<std::string> categories_;
  FeatureSchema schema_;
  MlpOptions options_;
  std::vector<TermId> selected_terms_;  // increasing ids
  std::vector<double> dense_min_;
  std::vector<double> dense_range_;
  MlpParameters params_;
};

/// Chi-squared score of each term's presence against the categories;
/// returns the `top_k` best term ids in increasing id order.
std::vector<TermId> select_terms_chi2(const Dataset& data, std::size_t top_k);

/// Backpropagation with momentum, one example at a time in a reshuffled
/// order each epoch. When `epoch_losses` is given it receives mlp_loss
/// before training and after every epoch. Throws Error(kUsage) for
/// top_k < 1 and Error(kInvariant) naming the epoch if the loss stops
/// being finite.
MlpModel train_mlp(const Dataset& data, const MlpOptions& options = {},
                   std::vector<double>* epoch_losses = nullptr);

}  // namespace semsearch
