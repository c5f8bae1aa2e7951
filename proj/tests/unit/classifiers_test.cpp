#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "semsearch/decision_tree.hpp"
#include "semsearch/error.hpp"
#include "semsearch/mlp.hpp"
#include "semsearch/naive_bayes.hpp"
#include "semsearch/random.hpp"
#include "semsearch/svm.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace semsearch {
namespace {

using testing::dense_dataset;
using testing::direct_posterior;
using testing::encoded;
using testing::gradient_fixture;
using testing::nb_hand_dataset;
using testing::random_count_dataset;
using testing::random_parameters;
using testing::worst_gradient_error;
using testing::xor_dataset;
using testing::make_dataset;
using testing::make_fv;

void expect_distribution(const CategoryDistribution& d, std::size_t k) {
  ASSERT_EQ(d.size(), k);
  double sum = 0.0;
  for (double p : d.probabilities) {
    EXPECT_GE(p, 0.0);
    EXPECT_TRUE(std::isfinite(p));
    sum += p;
  }
  EXPECT_NEAR(sum, 1.0, 1e-9);
}

// ---------------------------------------------------------------- contract

TEST(Contract, ArgmaxTiesGoToLowestIndex) {
  EXPECT_EQ((CategoryDistribution{{0.25, 0.5, 0.25}}).argmax(), 1u);
  EXPECT_EQ((CategoryDistribution{{0.4, 0.2, 0.4}}).argmax(), 0u);
  EXPECT_EQ((CategoryDistribution{{0.5, 0.5}}).argmax(), 0u);
}

TEST(Contract, SoftmaxIsShiftInvariant) {
  const std::vector<double> a = {1.0, 2.0, 3.0};
  const std::vector<double> b = {1001.0, 1002.0, 1003.0};
  const auto pa = softmax(a);
  const auto pb = softmax(b);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(pa[i], pb[i], 1e-12);
  expect_distribution(pa, 3);
}

TEST(Contract, SchemaMismatchRejected) {
  const auto nb = train_naive_bayes(nb_hand_dataset());
  EXPECT_THROW(nb.predict_proba(make_fv({{7, 1}})), Error);
  EXPECT_THROW(nb.predict_proba(make_fv({{0, 1}}, {1.0})), Error);
  try {
    nb.predict_proba(make_fv({{9, 1}}));
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchema);
  }
}

TEST(Contract, AllModelsGiveValidDeterministicDistributions) {
  Rng rng(17);
  const Dataset d = random_count_dataset(rng, 3, 8, 30, 2);
  MlpOptions mo;
  mo.epochs = 50;
  const auto nb = train_naive_bayes(d);
  const auto svm = train_svm_smo(d);
  const auto tree = train_decision_tree(d);
  const auto mlp = train_mlp(d, mo);
  for (const auto& ex : d.examples) {
    for (const auto& p : {nb.predict_proba(ex.features), svm.predict_proba(ex.features),
                          tree.predict_proba(ex.features), mlp.predict_proba(ex.features)}) {
      expect_distribution(p, 3);
    }
    EXPECT_EQ(nb.predict_proba(ex.features), nb.predict_proba(ex.features));
    EXPECT_EQ(svm.predict_proba(ex.features), svm.predict_proba(ex.features));
    EXPECT_EQ(tree.predict_proba(ex.features), tree.predict_proba(ex.features));
    EXPECT_EQ(mlp.predict_proba(ex.features), mlp.predict_proba(ex.features));
  }
}

TEST(Contract, DatasetValidation) {
  Dataset d = nb_hand_dataset();
  EXPECT_NO_THROW(d.validate());
  d.examples[0].category = 5;
  EXPECT_THROW(d.validate(), Error);
  d = nb_hand_dataset();
  d.examples[1].features.sparse[0].weight = std::nan("");
  EXPECT_THROW(d.validate(), Error);
}

// ---------------------------------------------------------------- naive Bayes

TEST(NaiveBayes, HandExample) {
  const auto m = train_naive_bayes(nb_hand_dataset());
  EXPECT_DOUBLE_EQ(m.prior(0), 0.5);
  EXPECT_NEAR(m.term_likelihood(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(m.term_likelihood(1, 0), 1.0 / 6.0, 1e-15);
  const auto p = m.predict_proba(make_fv({{0, 1}}));
  EXPECT_NEAR(p[0], 0.75, 1e-9);
  EXPECT_NEAR(p[1], 0.25, 1e-9);
}

TEST(NaiveBayes, LikelihoodsSumToOne) {
  Rng rng(4);
  const Dataset d = random_count_dataset(rng, 3, 10, 24, 0);
  const auto m = train_naive_bayes(d);
  for (CategoryIndex c = 0; c < 3; ++c) {
    double s = 0.0;
    for (TermId t = 0; t < 10; ++t) s += m.term_likelihood(c, t);
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(NaiveBayes, EmptyVectorGivesPriors) {
  Dataset d = nb_hand_dataset();
  d.examples.push_back({make_fv({{0, 1}}), 0});
  const auto m = train_naive_bayes(d);
  const auto p = m.predict_proba(FeatureVector{});
  EXPECT_NEAR(p[0], 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(p[1], 1.0 / 3.0, 1e-12);
}

TEST(NaiveBayes, LogSpaceMatchesDirectProduct) {
  Rng rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t vocab = 2 + rng.below(9);
    const Dataset d = random_count_dataset(rng, 2 + rng.below(3), vocab, 12, 0);
    const double alpha = 0.5 + rng.unit();
    NaiveBayesOptions o;
    o.alpha = alpha;
    const auto m = train_naive_bayes(d, o);
    for (const auto& ex : d.examples) {
      const auto got = m.predict_proba(ex.features);
      const auto want = direct_posterior(d, alpha, ex.features);
      for (std::size_t c = 0; c < want.size(); ++c) {
        EXPECT_NEAR(got[c], want[c], 1e-9 * std::max(1.0, want[c]));
      }
    }
  }
}

TEST(NaiveBayes, DuplicatingDataWithDoubledAlphaKeepsPredictions) {
  Rng rng(12);
  const Dataset d = random_count_dataset(rng, 3, 6, 18, 3);
  Dataset twice = d;
  twice.examples.insert(twice.examples.end(), d.examples.begin(), d.examples.end());
  NaiveBayesOptions doubled;
  doubled.alpha = 2.0;
  const auto a = train_naive_bayes(d);
  const auto b = train_naive_bayes(twice, doubled);
  for (const auto& ex : d.examples) {
    const auto pa = a.predict_proba(ex.features);
    const auto pb = b.predict_proba(ex.features);
    for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(pa[c], pb[c], 1e-12);
  }
}

TEST(NaiveBayes, DenseFeaturesUseQuartileBins) {
  Dataset d = dense_dataset({{1}, {2}, {3}, {4}, {5}, {6}, {7}, {8}}, {0, 0, 0, 0, 1, 1, 1, 1},
                            {"low", "high"});
  const auto m = train_naive_bayes(d);
  EXPECT_LT(m.bin_of(0, 1.0), m.bin_of(0, 8.0));
  EXPECT_EQ(m.predict_proba(make_fv({}, {1.5})).argmax(), 0u);
  EXPECT_EQ(m.predict_proba(make_fv({}, {7.5})).argmax(), 1u);
}

TEST(NaiveBayes, Errors) {
  EXPECT_THROW(train_naive_bayes(make_dataset({"A"}, 1, 0)), Error);
  Dataset d = nb_hand_dataset();
  d.categories.push_back("C");
  EXPECT_THROW(train_naive_bayes(d), Error);
}

// ---------------------------------------------------------------- SVM

TEST(Svm, OneDimensionalMaxMargin) {
  const Dataset d = dense_dataset({{-1.0}, {1.0}}, {0, 1}, {"A", "B"});
  const auto m = train_svm_smo(d);
  ASSERT_EQ(m.machines().size(), 1u);
  EXPECT_NEAR(m.decision_value(0, make_fv({}, {0.0})), 0.0, 1e-9);
  EXPECT_EQ(m.predict_proba(make_fv({}, {0.5})).argmax(), 1u);
  EXPECT_EQ(m.predict_proba(make_fv({}, {-0.5})).argmax(), 0u);
}

Dataset clustered_dense(std::size_t k, std::size_t per, std::uint64_t seed, double spread) {
  Rng rng(seed);
  std::vector<std::vector<double>> xs;
  std::vector<CategoryIndex> ys;
  std::vector<std::string> cats;
  for (std::size_t c = 0; c < k; ++c) {
    cats.push_back("c" + std::to_string(c));
    const double angle = 2.0 * M_PI * static_cast<double>(c) / static_cast<double>(k);
    for (std::size_t i = 0; i < per; ++i) {
      xs.push_back({10.0 * std::cos(angle) + rng.uniform(-spread, spread),
                    10.0 * std::sin(angle) + rng.uniform(-spread, spread)});
      ys.push_back(c);
    }
  }
  return dense_dataset(xs, ys, cats);
}

TEST(Svm, OneMachinePerPairAndBoxConstraints) {
  const Dataset d = clustered_dense(7, 6, 3, 1.0);
  SvmOptions o;
  o.C = 0.7;
  const auto m = train_svm_smo(d, o);
  ASSERT_EQ(m.machines().size(), 21u);
  std::set<std::pair<CategoryIndex, CategoryIndex>> pairs;
  for (const auto& mc : m.machines()) {
    pairs.insert({std::min(mc.positive, mc.negative), std::max(mc.positive, mc.negative)});
    ASSERT_EQ(mc.alphas.size(), mc.examples.size());
    for (double a : mc.alphas) {
      EXPECT_GE(a, 0.0);
      EXPECT_LE(a, o.C);
    }
  }
  EXPECT_EQ(pairs.size(), 21u);
}

TEST(Svm, SeparableDataHasZeroErrorAndFullMargins) {
  const Dataset d = clustered_dense(4, 8, 9, 1.5);
  SvmOptions o;
  o.C = 10.0;
  const auto m = train_svm_smo(d, o);
  for (const auto& ex : d.examples) EXPECT_EQ(m.predict_proba(ex.features).argmax(), ex.category);
  for (std::size_t j = 0; j < m.machines().size(); ++j) {
    const auto& mc = m.machines()[j];
    for (std::size_t i = 0; i < mc.examples.size(); ++i) {
      if (mc.alphas[i] <= 0.0) continue;
      const double f = m.decision_value(j, d.examples[mc.examples[i]].features);
      EXPECT_GE(std::abs(f), 1.0 - o.tol) << "machine " << j;
    }
  }
}

TEST(Svm, WeightsAreTheAlphaExpansion) {
  const Dataset d = clustered_dense(3, 5, 21, 2.0);
  const auto m = train_svm_smo(d);
  for (const auto& mc : m.machines()) {
    std::vector<double> w(mc.weights.size(), 0.0);
    for (std::size_t i = 0; i < mc.examples.size(); ++i) {
      const auto& ex = d.examples[mc.examples[i]];
      const double y = ex.category == mc.positive ? 1.0 : -1.0;
      const auto x = m.encode(ex.features);
      for (std::size_t f = 0; f < w.size(); ++f) w[f] += mc.alphas[i] * y * x[f];
    }
    for (std::size_t f = 0; f < w.size(); ++f) EXPECT_NEAR(w[f], mc.weights[f], 1e-9);
  }
}

TEST(Svm, ProbabilitiesAreSoftmaxOfPairwiseVotes) {
  const Dataset d = clustered_dense(4, 5, 5, 1.0);
  const auto m = train_svm_smo(d);
  for (const auto& ex : d.examples) {
    const auto votes = m.votes(ex.features);
    EXPECT_EQ(std::accumulate(votes.begin(), votes.end(), 0), 6);
    double z = 0.0;
    for (int v : votes) z += std::exp(static_cast<double>(v));
    const auto p = m.predict_proba(ex.features);
    for (std::size_t c = 0; c < 4; ++c) EXPECT_NEAR(p[c], std::exp(votes[c]) / z, 1e-12);
    const auto top = static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
    EXPECT_EQ(p.argmax(), top);
  }
}

TEST(Svm, ClearWinnerClearsTheNullFloorAtSevenCategories) {
  const Dataset d = clustered_dense(7, 6, 3, 1.0);
  const auto m = train_svm_smo(d);
  for (const auto& ex : d.examples) EXPECT_GE(m.predict_proba(ex.features).max(), 0.40);
}

TEST(Svm, Errors) {
  EXPECT_THROW(train_svm_smo(dense_dataset({{1.0}, {2.0}}, {0, 0}, {"A"})), Error);
  SvmOptions bad;
  bad.C = 0.0;
  EXPECT_THROW(train_svm_smo(dense_dataset({{1.0}, {2.0}}, {0, 1}, {"A", "B"}), bad), Error);
  Dataset d = dense_dataset({{1.0}, {2.0}}, {0, 1}, {"A", "B"});
  d.examples[0].features.dense[0] = INFINITY;
  EXPECT_THROW(train_svm_smo(d), Error);
}

// ---------------------------------------------------------------- tree

Dataset presence_dataset(const std::vector<std::vector<TermId>>& rows,
                         const std::vector<CategoryIndex>& labels, std::size_t num_terms,
                         std::vector<std::string> cats) {
  Dataset d = make_dataset(std::move(cats), num_terms, 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<std::pair<TermId, double>> counts;
    for (TermId t : rows[i]) counts.push_back({t, 1.0});
    d.examples.push_back({make_fv(counts), labels[i]});
  }
  return d;
}

double training_accuracy(const TreeModel& m, const Dataset& d) {
  std::size_t ok = 0;
  for (const auto& ex : d.examples) ok += m.predict_proba(ex.features).argmax() == ex.category;
  return static_cast<double>(ok) / static_cast<double>(d.examples.size());
}

TEST(Tree, SingleInformativeFeatureGivesDepthOne) {
  const Dataset d = presence_dataset({{0, 1}, {1}, {0, 1}, {1}, {2}, {}, {0, 2}, {}},
                                     {0, 0, 0, 0, 1, 1, 1, 1}, 3, {"A", "B"});
  const auto m = train_decision_tree(d);
  EXPECT_EQ(m.depth(), 1u);
  EXPECT_EQ(m.nodes()[0].split.kind, SplitKind::kTermPresence);
  EXPECT_EQ(m.nodes()[0].split.feature, 1u);
  EXPECT_DOUBLE_EQ(training_accuracy(m, d), 1.0);
}

TEST(Tree, IdenticalLabelsGiveOneLeaf) {
  const Dataset d = presence_dataset({{0}, {1}, {0, 1}}, {1, 1, 1}, 2, {"A", "B"});
  const auto m = train_decision_tree(d);
  EXPECT_EQ(m.leaf_count(), 1u);
  EXPECT_EQ(m.depth(), 0u);
  EXPECT_EQ(m.predict_proba(make_fv({{0, 1}})).argmax(), 1u);
}

TEST(Tree, PureLeafIsConfident) {
  const Dataset d = presence_dataset({{0}, {0}, {0}, {1}, {1}, {1}}, {0, 0, 0, 1, 1, 1}, 2,
                                     {"A", "B"});
  const auto m = train_decision_tree(d);
  EXPECT_GE(m.predict_proba(make_fv({{0, 1}})).max(), 0.9);
}

TEST(Tree, XorNeedsDepthTwo) {
  const Dataset d = dense_dataset({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {0, 1, 1, 0}, {"same", "diff"});
  TreeOptions o;
  o.prune = false;
  o.min_leaf = 1;
  const auto m = train_decision_tree(d, o);
  EXPECT_EQ(m.depth(), 2u);
  EXPECT_EQ(m.leaf_count(), 4u);
  EXPECT_DOUBLE_EQ(training_accuracy(m, d), 1.0);
}

// Independent gain-ratio of a boolean partition, in bits.
double h_bits(const std::map<CategoryIndex, double>& counts, double n) {
  double h = 0.0;
  for (const auto& [c, v] : counts) {
    if (v > 0) h -= v / n * std::log2(v / n);
  }
  return h;
}

double oracle_gain_ratio(const Dataset& d, const std::vector<std::size_t>& rows,
                         const std::function<bool(const FeatureVector&)>& goes_right) {
  std::map<CategoryIndex, double> all, left, right;
  double nl = 0, nr = 0;
  for (auto r : rows) {
    const auto& ex = d.examples[r];
    all[ex.category] += 1;
    if (goes_right(ex.features)) {
      right[ex.category] += 1;
      nr += 1;
    } else {
      left[ex.category] += 1;
      nl += 1;
    }
  }
  const double n = nl + nr;
  const double gain = h_bits(all, n) - nl / n * h_bits(left, nl) - nr / n * h_bits(right, nr);
  const double split = -(nl / n) * std::log2(nl / n) - (nr / n) * std::log2(nr / n);
  return gain / split;
}

struct OracleCandidates {
  std::size_t count = 0;
  double best_ratio = 0.0;
};

OracleCandidates oracle_candidates(const Dataset& d, const std::vector<std::size_t>& rows,
                                   std::size_t min_leaf) {
  OracleCandidates out;
  auto consider = [&](const std::function<bool(const FeatureVector&)>& right) {
    std::size_t nr = 0;
    for (auto r : rows) nr += right(d.examples[r].features);
    if (nr < min_leaf || rows.size() - nr < min_leaf) return;
    ++out.count;
    out.best_ratio = std::max(out.best_ratio, oracle_gain_ratio(d, rows, right));
  };
  for (TermId t = 0; t < d.num_terms; ++t) {
    consider([t](const FeatureVector& fv) {
      return std::any_of(fv.sparse.begin(), fv.sparse.end(), [t](const TermWeight& e) { return e.term == t; });
    });
  }
  for (std::size_t f = 0; f < d.dense_size; ++f) {
    std::set<double> values;
    for (auto r : rows) values.insert(d.examples[r].features.dense[f]);
    for (auto it = values.begin(); std::next(it) != values.end(); ++it) {
      const double thr = (*it + *std::next(it)) / 2.0;
      consider([f, thr](const FeatureVector& fv) { return fv.dense[f] > thr; });
    }
  }
  return out;
}

bool goes_right(const SplitCandidate& s, const FeatureVector& fv) {
  if (s.kind == SplitKind::kDenseThreshold) return fv.dense[s.feature] > s.threshold;
  return std::any_of(fv.sparse.begin(), fv.sparse.end(),
                     [&](const TermWeight& e) { return e.term == s.feature; });
}

TEST(Tree, ChosenSplitsMaximizeGainRatio) {
  Rng rng(99);
  for (int trial = 0; trial < 15; ++trial) {
    Dataset d = random_count_dataset(rng, 3, 6, 20 + rng.below(30), 2);
    for (auto& ex : d.examples) {
      // Make labels depend on a term so splits carry signal.
      const bool has0 = std::any_of(ex.features.sparse.begin(), ex.features.sparse.end(),
                                    [](const TermWeight& e) { return e.term == 0; });
      if (has0 && rng.below(4) != 0) ex.category = 2;
    }
    TreeOptions o;
    o.prune = false;
    const auto m = train_decision_tree(d, o);
    // Walk the training rows down the tree and check every interior node.
    std::vector<std::vector<std::size_t>> reach(m.nodes().size());
    std::vector<std::size_t> all(d.examples.size());
    std::iota(all.begin(), all.end(), 0);
    reach[0] = all;
    for (std::size_t i = 0; i < m.nodes().size(); ++i) {
      const auto& node = m.nodes()[i];
      if (node.leaf) continue;
      const auto rows = reach[i];
      const auto oracle = oracle_candidates(d, rows, o.min_leaf);
      EXPECT_EQ(enumerate_splits(d, rows, o.min_leaf).size(), oracle.count);
      const double chosen = oracle_gain_ratio(
          d, rows, [&](const FeatureVector& fv) { return goes_right(node.split, fv); });
      EXPECT_GE(chosen, oracle.best_ratio - 1e-12) << "trial " << trial << " node " << i;
      EXPECT_NEAR(node.split.gain_ratio, chosen, 1e-9);
      for (auto r : rows) {
        const auto next = goes_right(node.split, d.examples[r].features) ? node.right : node.left;
        reach[static_cast<std::size_t>(next)].push_back(r);
      }
    }
  }
}

TEST(Tree, PruningNeverGrowsTheTree) {
  Rng rng(2);
  const Dataset d = random_count_dataset(rng, 3, 8, 60, 2);
  TreeOptions o;
  o.prune = false;
  const auto full = train_decision_tree(d, o);
  o.prune = true;
  const auto pruned = train_decision_tree(d, o);
  EXPECT_LE(pruned.leaf_count(), full.leaf_count());
  for (const auto& node : pruned.nodes()) {
    if (node.leaf) {
      EXPECT_GT(std::accumulate(node.counts.begin(), node.counts.end(), 0.0), 0.0);
    }
  }
}

TEST(Tree, PessimisticEstimate) {
  EXPECT_DOUBLE_EQ(pessimistic_extra_errors(0.0, 0.0, 0.25), 0.0);
  // No errors: n * (1 - cf^(1/n)).
  EXPECT_NEAR(pessimistic_extra_errors(6.0, 0.0, 0.25), 6.0 * (1.0 - std::pow(0.25, 1.0 / 6.0)), 1e-12);
  // More cases with the same error rate give a tighter bound per case.
  EXPECT_GT(pessimistic_extra_errors(10, 2, 0.25) / 10, pessimistic_extra_errors(100, 20, 0.25) / 100);
  EXPECT_GT(pessimistic_extra_errors(10, 2, 0.1), pessimistic_extra_errors(10, 2, 0.25));
}

TEST(Tree, EmptyDataRejected) { EXPECT_THROW(train_decision_tree(make_dataset({"A"}, 1, 0)), Error); }

// ---------------------------------------------------------------- MLP

TEST(Mlp, GradientMatchesCentralDifferences) {
  Rng rng(2718);
  const MlpParameters p = random_parameters(3, 4, 3, rng);
  ASSERT_EQ(mlp_gradient(p, gradient_fixture()).size(), p.size());
  EXPECT_LE(worst_gradient_error(p, gradient_fixture()), 1e-4);
}

TEST(Mlp, ForwardUsesSigmoids) {
  MlpParameters p{1, 1, 1, {0.0, 0.0, 0.0, 0.0}};
  const auto a = mlp_forward(p, {3.0});
  EXPECT_DOUBLE_EQ(a.hidden[0], 0.5);
  EXPECT_DOUBLE_EQ(a.output[0], 0.5);
  EXPECT_DOUBLE_EQ(mlp_loss(p, {{{3.0}, 0}}), 0.5 * 0.25);
  EXPECT_DOUBLE_EQ(mlp_mse(p, {{{3.0}, 0}}), 0.25);
}

// Seed 42 is the recorded seed for this fixture.
TEST(Mlp, LearnsXorAtRecordedSeed) {
  MlpOptions o;
  o.hidden = 4;
  o.seed = 42;
  o.epochs = 5000;
  std::vector<double> losses;
  const Dataset d = xor_dataset();
  const auto m = train_mlp(d, o, &losses);
  ASSERT_EQ(losses.size(), 5001u);
  EXPECT_LT(losses.back(), losses.front());
  EXPECT_LT(mlp_mse(m.parameters(), encoded(m, d)), 0.1);
  for (const auto& ex : d.examples) EXPECT_EQ(m.predict_proba(ex.features).argmax(), ex.category);
}

TEST(Mlp, SeedsChangeWeightsButNotTheContract) {
  const Dataset d = xor_dataset();
  MlpOptions a;
  a.epochs = 20;
  a.seed = 1;
  MlpOptions b = a;
  b.seed = 2;
  const auto ma = train_mlp(d, a);
  const auto mb = train_mlp(d, b);
  EXPECT_NE(ma.parameters().weights, mb.parameters().weights);
  for (const auto& ex : d.examples) {
    expect_distribution(ma.predict_proba(ex.features), 2);
    expect_distribution(mb.predict_proba(ex.features), 2);
  }
  EXPECT_EQ(train_mlp(d, a).parameters(), ma.parameters());
}

TEST(Mlp, AutoHiddenSizeAndInitRange) {
  Rng rng(6);
  const Dataset d = random_count_dataset(rng, 3, 20, 30, 4);
  MlpOptions o;
  o.epochs = 0;
  o.top_k = 10;
  const auto m = train_mlp(d, o);
  EXPECT_EQ(m.selected_terms().size(), 10u);
  EXPECT_EQ(m.parameters().inputs, 14u);
  EXPECT_EQ(m.parameters().hidden, 9u);  // ceil((14 + 3) / 2)
  for (double w : m.parameters().weights) {
    EXPECT_GE(w, -0.5);
    EXPECT_LE(w, 0.5);
  }
  o.top_k = 0;
  EXPECT_THROW(train_mlp(d, o), Error);
}

TEST(Mlp, ChiSquaredPrefersInformativeTerms) {
  // Term 0 tracks the label, term 1 appears everywhere, term 2 is noise.
  const Dataset d = presence_dataset({{0, 1}, {0, 1, 2}, {0, 1}, {1}, {1, 2}, {1}},
                                     {0, 0, 0, 1, 1, 1}, 3, {"A", "B"});
  EXPECT_EQ(select_terms_chi2(d, 1), (std::vector<TermId>{0}));
  EXPECT_EQ(select_terms_chi2(d, 5).size(), 3u);
}

}  // namespace
}  // namespace semsearch
