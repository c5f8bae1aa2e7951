#include "semsearch/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "semsearch/error.hpp"

namespace semsearch {
namespace {

// Upper bound on full sweeps so a degenerate problem cannot spin forever.
constexpr int kMaxSweeps = 5000;
constexpr double kAlphaEps = 1e-8;

struct Encoded {
  std::vector<TermId> terms;
  std::vector<double> dense;
};

double kernel(const Encoded& a, const Encoded& b) {
  double sum = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.terms.size() && j < b.terms.size()) {
    if (a.terms[i] < b.terms[j]) {
      ++i;
    } else if (b.terms[j] < a.terms[i]) {
      ++j;
    } else {
      sum += 1.0;
      ++i;
      ++j;
    }
  }
  for (std::size_t k = 0; k < a.dense.size(); ++k) sum += a.dense[k] * b.dense[k];
  return sum;
}

// Binary SMO over a precomputed Gram matrix. Sweeps visit every example
// in order; a violator is paired with the most violating example on the
// other side of Keerthi's two thresholds (b_up, b_low), which avoids the
// stalls of Platt's single bias estimate. F_i = sum_j a_j y_j K_ij - y_i.
class Smo {
 public:
  Smo(const std::vector<double>& gram, std::size_t stride, std::vector<std::size_t> rows,
      std::vector<double> y, const SvmOptions& opt)
      : gram_(gram), stride_(stride), rows_(std::move(rows)), y_(std::move(y)), opt_(opt),
        alpha_(rows_.size(), 0.0), f_(rows_.size()) {
    for (std::size_t i = 0; i < y_.size(); ++i) f_[i] = -y_[i];
  }

  void run() {
    int passes = 0;
    int sweeps = 0;
    while (passes < opt_.max_passes && sweeps < kMaxSweeps) {
      ++sweeps;
      int changed = 0;
      for (std::size_t i = 0; i < alpha_.size(); ++i) {
        if (examine(i)) ++changed;
      }
      passes = changed == 0 ? passes + 1 : 0;
    }
    // Midpoint of the thresholds: free vectors end within tol of the margin.
    const auto [up, low] = thresholds();
    bias_ = -0.5 * (up.value + low.value);
  }

  const std::vector<double>& alphas() const { return alpha_; }
  double bias() const { return bias_; }

 private:
  struct Extreme {
    std::size_t index;
    double value;
  };

  double k(std::size_t a, std::size_t b) const { return gram_[rows_[a] * stride_ + rows_[b]]; }

  bool in_up(std::size_t i) const {
    return y_[i] > 0 ? alpha_[i] < opt_.C : alpha_[i] > 0.0;
  }
  bool in_low(std::size_t i) const {
    return y_[i] > 0 ? alpha_[i] > 0.0 : alpha_[i] < opt_.C;
  }

  // b_up = min F over the up set, b_low = max F over the low set.
  std::pair<Extreme, Extreme> thresholds() const {
    Extreme up{alpha_.size(), std::numeric_limits<double>::infinity()};
    Extreme low{alpha_.size(), -std::numeric_limits<double>::infinity()};
    for (std::size_t t = 0; t < alpha_.size(); ++t) {
      if (in_up(t) && f_[t] < up.value) up = {t, f_[t]};
      if (in_low(t) && f_[t] > low.value) low = {t, f_[t]};
    }
    return {up, low};
  }

  bool examine(std::size_t i) {
    const auto [up, low] = thresholds();
    const double gap = 2.0 * opt_.tol;
    if (in_up(i) && f_[i] < low.value - gap && step(i, low.index)) return true;
    if (in_low(i) && f_[i] > up.value + gap && step(i, up.index)) return true;
    return false;
  }

  bool step(std::size_t i, std::size_t j) {
    if (i == j || j >= alpha_.size()) return false;
    const double C = opt_.C;
    const double ai = alpha_[i];
    const double aj = alpha_[j];
    const double yi = y_[i];
    const double yj = y_[j];
    double lo;
    double hi;
    if (yi != yj) {
      lo = std::max(0.0, aj - ai);
      hi = std::min(C, C + aj - ai);
    } else {
      lo = std::max(0.0, ai + aj - C);
      hi = std::min(C, ai + aj);
    }
    if (hi - lo < kAlphaEps) return false;
    const double kii = k(i, i);
    const double kjj = k(j, j);
    const double kij = k(i, j);
    const double eta = 2.0 * kij - kii - kjj;
    if (eta >= 0.0) return false;

    double aj_new = std::clamp(aj - yj * (f_[i] - f_[j]) / eta, lo, hi);
    if (aj_new < kAlphaEps) aj_new = 0.0;
    if (aj_new > C - kAlphaEps) aj_new = C;
    if (std::abs(aj_new - aj) < 1e-5 * (aj_new + aj + 1e-5)) return false;
    double ai_new = std::clamp(ai + yi * yj * (aj - aj_new), 0.0, C);
    if (ai_new < kAlphaEps) ai_new = 0.0;
    if (ai_new > C - kAlphaEps) ai_new = C;

    const double di = ai_new - ai;
    const double dj = aj_new - aj;
    for (std::size_t t = 0; t < alpha_.size(); ++t) {
      f_[t] += yi * di * k(i, t) + yj * dj * k(j, t);
    }
    alpha_[i] = ai_new;
    alpha_[j] = aj_new;
    return true;
  }

  const std::vector<double>& gram_;
  std::size_t stride_;
  std::vector<std::size_t> rows_;
  std::vector<double> y_;
  SvmOptions opt_;
  std::vector<double> alpha_;
  std::vector<double> f_;
  double bias_ = 0.0;
};

}  // namespace

std::vector<double> SvmModel::encode(const FeatureVector& fv) const {
  schema_.check(fv);
  std::vector<double> x(schema_.num_terms + schema_.dense_size, 0.0);
  for (const auto& e : fv.sparse) {
    if (e.weight > 0.0) x[e.term] = 1.0;
  }
  for (std::size_t j = 0; j < schema_.dense_size; ++j) {
    x[schema_.num_terms + j] =
        dense_range_[j] > 0.0 ? (fv.dense[j] - dense_min_[j]) / dense_range_[j] : 0.0;
  }
  return x;
}

double SvmModel::decision_value(std::size_t machine, const FeatureVector& fv) const {
  const auto x = encode(fv);
  const auto& m = machines_.at(machine);
  double f = m.bias;
  for (std::size_t i = 0; i < x.size(); ++i) f += m.weights[i] * x[i];
  return f;
}

std::vector<int> SvmModel::votes(const FeatureVector& fv) const {
  const auto x = encode(fv);
  std::vector<int> v(categories_.size(), 0);
  for (const auto& m : machines_) {
    double f = m.bias;
    for (std::size_t i = 0; i < x.size(); ++i) f += m.weights[i] * x[i];
    ++v[f >= 0.0 ? m.positive : m.negative];
  }
  return v;
}

CategoryDistribution SvmModel::predict_proba(const FeatureVector& fv) const {
  const auto v = votes(fv);
  std::vector<double> scores(v.begin(), v.end());
  return softmax(scores);
}

SvmModel train_svm_smo(const Dataset& data, const SvmOptions& options) {
  if (!(options.C > 0.0) || !(options.tol > 0.0) || options.max_passes < 1) {
    throw Error(ErrorCode::kUsage, "SVM: C and tol must be positive, max_passes at least 1");
  }
  if (data.categories.size() < 2) {
    throw Error(ErrorCode::kData, "SVM: needs at least two categories");
  }
  data.validate();
  const auto counts = data.category_counts();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) {
      throw Error(ErrorCode::kData,
                  "SVM: category '" + data.categories[c] + "' has no training examples");
    }
  }

  const std::size_t n = data.examples.size();
  const std::size_t v = data.num_terms;
  const std::size_t d = data.dense_size;

  SvmModel m;
  m.categories_ = data.categories;
  m.schema_ = {std::string(kFeatureSchemaVersion), v, d};
  m.options_ = options;
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

  std::vector<Encoded> enc(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& fv = data.examples[i].features;
    for (const auto& e : fv.sparse) {
      if (e.weight > 0.0) enc[i].terms.push_back(e.term);
    }
    enc[i].dense.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
      enc[i].dense[j] =
          m.dense_range_[j] > 0.0 ? (fv.dense[j] - m.dense_min_[j]) / m.dense_range_[j] : 0.0;
    }
  }
  std::vector<double> gram(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      gram[i * n + j] = gram[j * n + i] = kernel(enc[i], enc[j]);
    }
  }

  const std::size_t k = data.categories.size();
  for (CategoryIndex a = 0; a < k; ++a) {
    for (CategoryIndex b = a + 1; b < k; ++b) {
      std::vector<std::size_t> rows;
      std::vector<double> y;
      for (std::size_t i = 0; i < n; ++i) {
        const auto c = data.examples[i].category;
        if (c == a || c == b) {
          rows.push_back(i);
          y.push_back(c == a ? 1.0 : -1.0);
        }
      }
      Smo smo(gram, n, rows, y, options);
      smo.run();

      SvmModel::BinaryMachine machine;
      machine.positive = a;
      machine.negative = b;
      machine.bias = smo.bias();
      machine.examples = rows;
      machine.alphas = smo.alphas();
      machine.weights.assign(v + d, 0.0);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const double coef = machine.alphas[r] * y[r];
        if (coef == 0.0) continue;
        const Encoded& x = enc[rows[r]];
        for (TermId t : x.terms) machine.weights[t] += coef;
        for (std::size_t j = 0; j < d; ++j) machine.weights[v + j] += coef * x.dense[j];
      }
      for (double w : machine.weights) {
        if (!std::isfinite(w)) {
          throw Error(ErrorCode::kInvariant, "SVM: non-finite weight in machine " +
                                                 data.categories[a] + "/" + data.categories[b]);
        }
      }
      m.machines_.push_back(std::move(machine));
    }
  }
  return m;
}

}  // namespace semsearch
