#include "semsearch/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "semsearch/error.hpp"
#include "semsearch/random.hpp"

namespace semsearch {
namespace {

constexpr std::size_t kMaxAutoHidden = 64;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct SparseInput {
  std::vector<std::size_t> index;
  std::vector<double> value;
};

SparseInput to_sparse(const std::vector<double>& x) {
  SparseInput s;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) {
      s.index.push_back(i);
      s.value.push_back(x[i]);
    }
  }
  return s;
}

void forward_sparse(const MlpParameters& p, const SparseInput& x, std::vector<double>& hidden,
                    std::vector<double>& output) {
  const auto& w = p.weights;
  for (std::size_t h = 0; h < p.hidden; ++h) {
    const std::size_t row = p.hidden_offset(h);
    double z = w[row + p.inputs];
    for (std::size_t k = 0; k < x.index.size(); ++k) z += w[row + x.index[k]] * x.value[k];
    hidden[h] = sigmoid(z);
  }
  for (std::size_t o = 0; o < p.outputs; ++o) {
    const std::size_t row = p.output_offset(o);
    double z = w[row + p.hidden];
    for (std::size_t h = 0; h < p.hidden; ++h) z += w[row + h] * hidden[h];
    output[o] = sigmoid(z);
  }
}

// Output and hidden deltas of 0.5 * sum (o - t)^2 for one example.
void deltas(const MlpParameters& p, std::size_t label, const std::vector<double>& hidden,
            const std::vector<double>& output, std::vector<double>& d_out,
            std::vector<double>& d_hidden) {
  for (std::size_t o = 0; o < p.outputs; ++o) {
    const double t = o == label ? 1.0 : 0.0;
    d_out[o] = (output[o] - t) * output[o] * (1.0 - output[o]);
  }
  for (std::size_t h = 0; h < p.hidden; ++h) {
    double s = 0.0;
    for (std::size_t o = 0; o < p.outputs; ++o) s += d_out[o] * p.weights[p.output_offset(o) + h];
    d_hidden[h] = s * hidden[h] * (1.0 - hidden[h]);
  }
}

double example_loss(const std::vector<double>& output, std::size_t label) {
  double sum = 0.0;
  for (std::size_t o = 0; o < output.size(); ++o) {
    const double diff = output[o] - (o == label ? 1.0 : 0.0);
    sum += diff * diff;
  }
  return 0.5 * sum;
}

}  // namespace

MlpActivations mlp_forward(const MlpParameters& p, const std::vector<double>& x) {
  if (x.size() != p.inputs) {
    throw Error(ErrorCode::kSchema, "MLP input has " + std::to_string(x.size()) +
                                        " values, network expects " + std::to_string(p.inputs));
  }
  MlpActivations a{std::vector<double>(p.hidden), std::vector<double>(p.outputs)};
  forward_sparse(p, to_sparse(x), a.hidden, a.output);
  return a;
}

double mlp_loss(const MlpParameters& p, const std::vector<MlpSample>& samples) {
  double total = 0.0;
  for (const auto& s : samples) total += example_loss(mlp_forward(p, s.x).output, s.label);
  return samples.empty() ? 0.0 : total / static_cast<double>(samples.size());
}

double mlp_mse(const MlpParameters& p, const std::vector<MlpSample>& samples) {
  if (samples.empty() || p.outputs == 0) return 0.0;
  return 2.0 * mlp_loss(p, samples) / static_cast<double>(p.outputs);
}

std::vector<double> mlp_gradient(const MlpParameters& p, const std::vector<MlpSample>& samples) {
  std::vector<double> grad(p.size(), 0.0);
  if (samples.empty()) return grad;
  std::vector<double> d_out(p.outputs);
  std::vector<double> d_hidden(p.hidden);
  const double scale = 1.0 / static_cast<double>(samples.size());
  for (const auto& s : samples) {
    const auto a = mlp_forward(p, s.x);
    deltas(p, s.label, a.hidden, a.output, d_out, d_hidden);
    for (std::size_t o = 0; o < p.outputs; ++o) {
      const std::size_t row = p.output_offset(o);
      for (std::size_t h = 0; h < p.hidden; ++h) grad[row + h] += scale * d_out[o] * a.hidden[h];
      grad[row + p.hidden] += scale * d_out[o];
    }
    for (std::size_t h = 0; h < p.hidden; ++h) {
      const std::size_t row = p.hidden_offset(h);
      for (std::size_t i = 0; i < p.inputs; ++i) grad[row + i] += scale * d_hidden[h] * s.x[i];
      grad[row + p.inputs] += scale * d_hidden[h];
    }
  }
  return grad;
}

std::vector<TermId> select_terms_chi2(const Dataset& data, std::size_t top_k) {
  const std::size_t k = data.categories.size();
  const double n = static_cast<double>(data.examples.size());
  const auto class_totals = data.category_counts();
  std::vector<std::vector<double>> present(data.num_terms);
  for (const auto& ex : data.examples) {
    for (const auto& e : ex.features.sparse) {
      if (e.weight <= 0.0) continue;
      auto& row = present[e.term];
      if (row.empty()) row.assign(k, 0.0);
      row[ex.category] += 1.0;
    }
  }
  std::vector<std::pair<double, TermId>> scored;
  for (std::size_t t = 0; t < present.size(); ++t) {
    if (present[t].empty()) continue;
    const double df = std::accumulate(present[t].begin(), present[t].end(), 0.0);
    double chi2 = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      const double col = static_cast<double>(class_totals[c]);
      if (col == 0.0) continue;
      const double cells[2] = {present[t][c], col - present[t][c]};
      const double rows[2] = {df, n - df};
      for (int r = 0; r < 2; ++r) {
        const double expected = rows[r] * col / n;
        if (expected > 0.0) chi2 += (cells[r] - expected) * (cells[r] - expected) / expected;
      }
    }
    scored.emplace_back(chi2, static_cast<TermId>(t));
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  if (scored.size() > top_k) scored.resize(top_k);
  std::vector<TermId> out;
  out.reserve(scored.size());
  for (const auto& s : scored) out.push_back(s.second);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> MlpModel::encode(const FeatureVector& fv) const {
  schema_.check(fv);
  std::vector<double> x(params_.inputs, 0.0);
  std::size_t s = 0;
  for (std::size_t i = 0; i < selected_terms_.size(); ++i) {
    while (s < fv.sparse.size() && fv.sparse[s].term < selected_terms_[i]) ++s;
    if (s < fv.sparse.size() && fv.sparse[s].term == selected_terms_[i]) x[i] = fv.sparse[s].weight;
  }
  const std::size_t base = selected_terms_.size();
  for (std::size_t j = 0; j < schema_.dense_size; ++j) {
    x[base + j] = dense_range_[j] > 0.0 ? (fv.dense[j] - dense_min_[j]) / dense_range_[j] : 0.0;
  }
  return x;
}

CategoryDistribution MlpModel::predict_proba(const FeatureVector& fv) const {
  const auto a = mlp_forward(params_, encode(fv));
  const double total = std::accumulate(a.output.begin(), a.output.end(), 0.0);
  CategoryDistribution out;
  out.probabilities.reserve(a.output.size());
  for (double o : a.output) out.probabilities.push_back(o / total);
  return out;
}

MlpModel train_mlp(const Dataset& data, const MlpOptions& options,
                   std::vector<double>* epoch_losses) {
  if (options.top_k < 1) throw Error(ErrorCode::kUsage, "MLP: top_k must be at least 1");
  if (!(options.lr > 0.0) || !(options.momentum >= 0.0 && options.momentum < 1.0) ||
      options.epochs < 0) {
    throw Error(ErrorCode::kUsage, "MLP: need lr > 0, 0 <= momentum < 1, epochs >= 0");
  }
  if (data.examples.empty()) throw Error(ErrorCode::kData, "MLP: no training data");
  data.validate();

  const std::size_t k = data.categories.size();
  const std::size_t d = data.dense_size;

  MlpModel m;
  m.categories_ = data.categories;
  m.schema_ = {std::string(kFeatureSchemaVersion), data.num_terms, d};
  m.options_ = options;
  m.selected_terms_ = select_terms_chi2(data, options.top_k);
  m.dense_min_.assign(d, 0.0);
  m.dense_range_.assign(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double lo = data.examples[0].features.dense[j];
    double hi = lo;
    for (const auto& ex : data.examples) {
      lo = std::min(lo, ex.features.dense[j]);
      hi = std::max(hi, ex.features.dense[j]);
    }
    m.dense_min_[j] = lo;
    m.dense_range_[j] = hi - lo;
  }

  MlpParameters& p = m.params_;
  p.inputs = m.selected_terms_.size() + d;
  p.outputs = k;
  p.hidden = options.hidden > 0
                 ? options.hidden
                 : std::clamp<std::size_t>((p.inputs + k + 1) / 2, 1, kMaxAutoHidden);
  Rng rng(options.seed);
  p.weights.resize(p.size());
  for (double& w : p.weights) w = rng.uniform(-0.5, 0.5);

  std::vector<SparseInput> inputs;
  std::vector<MlpSample> samples;
  inputs.reserve(data.examples.size());
  for (const auto& ex : data.examples) {
    auto x = m.encode(ex.features);
    inputs.push_back(to_sparse(x));
    if (epoch_losses != nullptr) samples.push_back({std::move(x), ex.category});
  }
  if (epoch_losses != nullptr) {
    epoch_losses->clear();
    epoch_losses->push_back(mlp_loss(p, samples));
  }

  // Momentum on input-to-hidden weights is applied lazily: a column whose
  // input is zero has zero gradient, so its pending velocity decays
  // geometrically and is settled in closed form when the column is next
  // touched (and once more at the end).
  const double lr = options.lr;
  const double mom = options.momentum;
  std::vector<double> velocity(p.size(), 0.0);
  std::vector<std::uint64_t> stamp(p.inputs + 1, 0);  // last step each input column was updated
  std::uint64_t step = 0;
  auto settle = [&](std::size_t column, std::uint64_t now) {
    const std::uint64_t missed = now - stamp[column] - 1;
    if (missed == 0) return;
    const double decay = std::pow(mom, static_cast<double>(missed));
    const double carried = mom == 0.0 ? 0.0 : mom * (1.0 - decay) / (1.0 - mom);
    for (std::size_t h = 0; h < p.hidden; ++h) {
      const std::size_t at = p.hidden_offset(h) + column;
      p.weights[at] += velocity[at] * carried;
      velocity[at] *= decay;
    }
  };

  std::vector<std::size_t> order(data.examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> hidden(p.hidden);
  std::vector<double> output(p.outputs);
  std::vector<double> d_out(p.outputs);
  std::vector<double> d_hidden(p.hidden);
  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double loss = 0.0;
    for (std::size_t idx : order) {
      ++step;
      const SparseInput& x = inputs[idx];
      const std::size_t label = data.examples[idx].category;
      forward_sparse(p, x, hidden, output);
      loss += example_loss(output, label);
      deltas(p, label, hidden, output, d_out, d_hidden);

      for (std::size_t o = 0; o < p.outputs; ++o) {
        const std::size_t row = p.output_offset(o);
        for (std::size_t h = 0; h <= p.hidden; ++h) {
          const double a = h < p.hidden ? hidden[h] : 1.0;
          double& v = velocity[row + h];
          v = -lr * d_out[o] * a + mom * v;
          p.weights[row + h] += v;
        }
      }
      for (std::size_t k2 = 0; k2 <= x.index.size(); ++k2) {
        const bool bias = k2 == x.index.size();
        const std::size_t column = bias ? p.inputs : x.index[k2];
        const double a = bias ? 1.0 : x.value[k2];
        settle(column, step);
        for (std::size_t h = 0; h < p.hidden; ++h) {
          const std::size_t at = p.hidden_offset(h) + column;
          double& v = velocity[at];
          v = -lr * d_hidden[h] * a + mom * v;
          p.weights[at] += v;
        }
        stamp[column] = step;
      }
    }
    if (!std::isfinite(loss)) {
      throw Error(ErrorCode::kInvariant,
                  "MLP: training loss became non-finite at epoch " + std::to_string(epoch));
    }
    if (epoch_losses != nullptr) {
      for (std::size_t c = 0; c <= p.inputs; ++c) {
        settle(c, step + 1);
        stamp[c] = step;
      }
      epoch_losses->push_back(mlp_loss(p, samples));
    }
  }
  for (std::size_t c = 0; c <= p.inputs; ++c) settle(c, step + 1);
  for (double w : p.weights) {
    if (!std::isfinite(w)) throw Error(ErrorCode::kInvariant, "MLP: non-finite weight after training");
  }
  return m;
}

}  // namespace semsearch
