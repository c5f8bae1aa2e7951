#include "semsearch/decision_tree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "semsearch/error.hpp"

namespace semsearch {
namespace {

constexpr double kMinGain = 1e-12;

double entropy_bits(std::span<const double> counts, double total) {
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) {
      const double p = c / total;
      h -= p * std::log2(p);
    }
  }
  return h;
}

bool has_term(const FeatureVector& fv, std::size_t term) {
  const auto it = std::lower_bound(fv.sparse.begin(), fv.sparse.end(), term,
                                   [](const TermWeight& e, std::size_t t) { return e.term < t; });
  return it != fv.sparse.end() && it->term == term && it->weight > 0.0;
}

bool goes_right(const SplitCandidate& s, const FeatureVector& fv) {
  if (s.kind == SplitKind::kTermPresence) return has_term(fv, s.feature);
  return fv.dense[s.feature] > s.threshold;
}

std::vector<double> class_counts(const Dataset& data, std::span<const std::size_t> rows) {
  std::vector<double> counts(data.categories.size(), 0.0);
  for (std::size_t r : rows) counts[data.examples[r].category] += 1.0;
  return counts;
}

// Scores a split given the per-class counts of its right branch.
void score(SplitCandidate& s, std::span<const double> total, std::span<const double> right,
           double n, double parent_entropy) {
  std::vector<double> left(total.size());
  double nr = 0.0;
  for (std::size_t c = 0; c < total.size(); ++c) {
    left[c] = total[c] - right[c];
    nr += right[c];
  }
  const double nl = n - nr;
  const double children = (nl / n) * entropy_bits(left, nl) + (nr / n) * entropy_bits(right, nr);
  s.gain = std::max(0.0, parent_entropy - children);
  const double split_info = -(nl / n) * std::log2(nl / n) - (nr / n) * std::log2(nr / n);
  s.gain_ratio = split_info > 0.0 ? s.gain / split_info : 0.0;
}

struct Partition {
  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
};

Partition partition(const Dataset& data, std::span<const std::size_t> rows,
                    const SplitCandidate& s) {
  Partition p;
  for (std::size_t r : rows) {
    (goes_right(s, data.examples[r].features) ? p.right : p.left).push_back(r);
  }
  return p;
}

// Entropy left after the best single split of `rows`, or the entropy of
// `rows` itself when no split is admissible.
double best_conditional_entropy(const Dataset& data, std::span<const std::size_t> rows,
                                std::size_t min_leaf) {
  const auto counts = class_counts(data, rows);
  const double h = entropy_bits(counts, static_cast<double>(rows.size()));
  if (h == 0.0 || rows.size() < 2 * min_leaf) return h;
  double best = h;
  for (const auto& s : enumerate_splits(data, rows, min_leaf)) best = std::min(best, h - s.gain);
  return best;
}

class Builder {
 public:
  Builder(const Dataset& data, const TreeOptions& opt) : data_(data), opt_(opt) {}

  std::int32_t build(std::vector<std::size_t> rows) {
    const auto index = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    nodes_[index].counts = class_counts(data_, rows);
    const auto& counts = nodes_[index].counts;
    const double n = static_cast<double>(rows.size());
    const bool pure = *std::max_element(counts.begin(), counts.end()) == n;
    if (pure || rows.size() < 2 * opt_.min_leaf) return index;

    const auto candidates = enumerate_splits(data_, rows, opt_.min_leaf);
    const SplitCandidate* chosen = nullptr;
    for (const auto& s : candidates) {
      if (s.gain > kMinGain && (chosen == nullptr || s.gain_ratio > chosen->gain_ratio)) {
        chosen = &s;
      }
    }
    if (chosen == nullptr) chosen = lookahead(rows, candidates);
    if (chosen == nullptr) return index;

    const SplitCandidate split = *chosen;
    auto parts = partition(data_, rows, split);
    const auto left = build(std::move(parts.left));
    const auto right = build(std::move(parts.right));
    nodes_[index].leaf = false;
    nodes_[index].split = split;
    nodes_[index].left = left;
    nodes_[index].right = right;
    return index;
  }

  // Estimated errors of the subtree at `index`, collapsing it into a leaf
  // when the subtree's estimate exceeds the leaf's.
  double prune(std::int32_t index) {
    auto& node = nodes_[index];
    const double n = std::accumulate(node.counts.begin(), node.counts.end(), 0.0);
    const double e = n - *std::max_element(node.counts.begin(), node.counts.end());
    const double as_leaf = e + pessimistic_extra_errors(n, e, opt_.confidence);
    if (node.leaf) return as_leaf;
    const double subtree = prune(node.left) + prune(nodes_[index].right);
    auto& again = nodes_[index];
    if (subtree > as_leaf) {
      again.leaf = true;
      again.left = again.right = -1;
      again.split = {};
      return as_leaf;
    }
    return subtree;
  }

  std::vector<TreeModel::Node> compact() const {
    std::vector<TreeModel::Node> out;
    copy(0, out);
    return out;
  }

 private:
  // With every split at zero gain (XOR-like labels) pick the split whose
  // best follow-up split removes the most entropy.
  const SplitCandidate* lookahead(std::span<const std::size_t> rows,
                                  const std::vector<SplitCandidate>& candidates) const {
    const auto counts = class_counts(data_, rows);
    const double n = static_cast<double>(rows.size());
    const double h = entropy_bits(counts, n);
    const SplitCandidate* chosen = nullptr;
    double best = kMinGain;
    for (const auto& s : candidates) {
      const auto parts = partition(data_, rows, s);
      const double remaining =
          (static_cast<double>(parts.left.size()) / n) *
              best_conditional_entropy(data_, parts.left, opt_.min_leaf) +
          (static_cast<double>(parts.right.size()) / n) *
              best_conditional_entropy(data_, parts.right, opt_.min_leaf);
      if (h - remaining > best) {
        best = h - remaining;
        chosen = &s;
      }
    }
    return chosen;
  }

  std::int32_t copy(std::int32_t index, std::vector<TreeModel::Node>& out) const {
    const auto& src = nodes_[index];
    const auto at = static_cast<std::int32_t>(out.size());
    out.push_back(src);
    if (!src.leaf) {
      const auto l = copy(src.left, out);
      const auto r = copy(src.right, out);
      out[at].left = l;
      out[at].right = r;
    }
    return at;
  }

  const Dataset& data_;
  const TreeOptions& opt_;
  std::vector<TreeModel::Node> nodes_;
};

}  // namespace

double pessimistic_extra_errors(double n, double e, double cf) {
  if (n <= 0.0) return 0.0;
  if (e < 1.0) {
    const double base = n * (1.0 - std::pow(cf, 1.0 / n));
    if (e == 0.0) return base;
    return base + e * (pessimistic_extra_errors(n, 1.0, cf) - base);
  }
  if (e + 0.5 >= n) return std::max(n - e, 0.0);
  const double z = boost::math::quantile(boost::math::normal(), 1.0 - cf);
  const double f = (e + 0.5) / n;
  const double r =
      (f + z * z / (2.0 * n) + z * std::sqrt(f / n - f * f / n + z * z / (4.0 * n * n))) /
      (1.0 + z * z / n);
  return r * n - e;
}

std::vector<SplitCandidate> enumerate_splits(const Dataset& data,
                                             std::span<const std::size_t> rows,
                                             std::size_t min_leaf) {
  std::vector<SplitCandidate> out;
  const std::size_t k = data.categories.size();
  const double n = static_cast<double>(rows.size());
  const auto total = class_counts(data, rows);
  const double h = entropy_bits(total, n);
  const std::size_t lo = std::max<std::size_t>(min_leaf, 1);
  auto admissible = [&](std::size_t right) { return right >= lo && rows.size() - right >= lo; };

  std::map<std::size_t, std::vector<double>> present;
  for (std::size_t r : rows) {
    const auto& ex = data.examples[r];
    for (const auto& e : ex.features.sparse) {
      if (e.weight <= 0.0) continue;
      auto& counts = present[e.term];
      if (counts.empty()) counts.assign(k, 0.0);
      counts[ex.category] += 1.0;
    }
  }
  for (const auto& [term, right] : present) {
    const double nr = std::accumulate(right.begin(), right.end(), 0.0);
    if (!admissible(static_cast<std::size_t>(nr))) continue;
    SplitCandidate s{SplitKind::kTermPresence, term, 0.0, 0.0, 0.0};
    score(s, total, right, n, h);
    out.push_back(s);
  }

  std::vector<std::pair<double, CategoryIndex>> column(rows.size());
  for (std::size_t j = 0; j < data.dense_size; ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& ex = data.examples[rows[i]];
      column[i] = {ex.features.dense[j], ex.category};
    }
    std::sort(column.begin(), column.end());
    // Sweep from the top so `right` holds the counts above each cut.
    std::vector<double> right(k, 0.0);
    std::vector<SplitCandidate> found;
    for (std::size_t i = column.size(); i-- > 1;) {
      right[column[i].second] += 1.0;
      if (column[i - 1].first == column[i].first) continue;
      if (!admissible(column.size() - i)) continue;
      SplitCandidate s{SplitKind::kDenseThreshold, j,
                       column[i - 1].first + (column[i].first - column[i - 1].first) / 2.0, 0.0,
                       0.0};
      score(s, total, right, n, h);
      found.push_back(s);
    }
    out.insert(out.end(), found.rbegin(), found.rend());
  }
  return out;
}

std::size_t TreeModel::leaf_for(const FeatureVector& fv) const {
  schema_.check(fv);
  std::size_t at = 0;
  while (!nodes_[at].leaf) {
    const auto& node = nodes_[at];
    at = static_cast<std::size_t>(goes_right(node.split, fv) ? node.right : node.left);
  }
  return at;
}

CategoryDistribution TreeModel::predict_proba(const FeatureVector& fv) const {
  const auto& counts = nodes_[leaf_for(fv)].counts;
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  CategoryDistribution out;
  out.probabilities.reserve(counts.size());
  for (double c : counts) out.probabilities.push_back(c / total);
  return out;
}

std::size_t TreeModel::depth() const {
  std::vector<std::size_t> level(nodes_.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (!nodes_[i].leaf) {
      level[static_cast<std::size_t>(nodes_[i].left)] = level[i] + 1;
      level[static_cast<std::size_t>(nodes_[i].right)] = level[i] + 1;
    }
  }
  return deepest;
}

std::size_t TreeModel::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.leaf; }));
}

TreeModel train_decision_tree(const Dataset& data, const TreeOptions& options) {
  if (data.examples.empty()) throw Error(ErrorCode::kData, "decision tree: no training data");
  if (options.min_leaf < 1) throw Error(ErrorCode::kUsage, "decision tree: min_leaf must be >= 1");
  if (!(options.confidence > 0.0 && options.confidence <= 0.5)) {
    throw Error(ErrorCode::kUsage, "decision tree: confidence must lie in (0, 0.5]");
  }
  data.validate();

  std::vector<std::size_t> rows(data.examples.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  Builder builder(data, options);
  builder.build(std::move(rows));
  if (options.prune) builder.prune(0);

  TreeModel m;
  m.categories_ = data.categories;
  m.schema_ = {std::string(kFeatureSchemaVersion), data.num_terms, data.dense_size};
  m.options_ = options;
  m.nodes_ = builder.compact();
  return m;
}

}  // namespace semsearch
