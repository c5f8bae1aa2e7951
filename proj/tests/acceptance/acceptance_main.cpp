// Runs the eight acceptance checks and prints one PASS/FAIL line each.
// Exit status is non-zero when any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "semsearch/ensemble.hpp"
#include "semsearch/eval.hpp"
#include "semsearch/experiment.hpp"
#include "semsearch/mlp.hpp"
#include "semsearch/model.hpp"
#include "semsearch/naive_bayes.hpp"
#include "semsearch/persistence.hpp"
#include "test_support.hpp"
#include "vote_oracle.hpp"

namespace semsearch {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::vector<int> as_ints(const std::vector<CategoryIndex>& v) { return {v.begin(), v.end()}; }

VoteOutcome vote_on(const std::array<std::optional<int>, 4>& labels) {
  std::array<Prediction, kClassifierKindCount> preds;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    preds[i].source = kAllClassifierKinds[i];
    if (labels[i]) preds[i].category = static_cast<CategoryIndex>(*labels[i]);
  }
  return vote(preds);
}

Outcome vote_rules() {
  const auto start = Clock::now();
  const auto cases = testing::all_vote_assignments();
  std::size_t agree = 0;
  for (const auto& labels : cases) {
    const auto got = vote_on(labels);
    const auto want = testing::oracle_vote(labels);
    agree += got.all_null == want.all_null && as_ints(got.winners) == want.winners;
  }
  const double elapsed = seconds_since(start);

  constexpr int A = 0, B = 1, C = 2, D = 3;
  constexpr std::optional<int> N = std::nullopt;
  struct Anchor {
    const char* name;
    std::array<std::optional<int>, 4> labels;
    std::vector<int> winners;
  };
  const Anchor anchors[] = {
      {"unanimous", {A, A, A, A}, {A}},
      {"3-1", {A, A, A, B}, {A}},
      {"all-distinct", {A, B, C, D}, {A, B, C, D}},
      {"single-non-null", {N, N, B, N}, {B}},
      {"two-disagreeing", {A, N, B, N}, {A, B}},
  };
  std::size_t anchored = 0;
  for (const auto& a : anchors) {
    const auto got = vote_on(a.labels);
    anchored += !got.all_null && as_ints(got.winners) == a.winners;
  }
  return {agree == cases.size() && cases.size() == 625 && anchored == 5 && elapsed < 1.0,
          fmt("%zu/%zu assignments agree with the brute-force rules, %zu/5 anchored cases, %.3f s",
              agree, cases.size(), anchored, elapsed)};
}

Outcome morphology() {
  const SuffixTable table = SuffixTable::load(default_data_dir() / "suffixes.tsv");
  const auto forms = testing::constructed_verb_forms(table);
  std::size_t agree = 0;
  std::size_t constructed_root_differs = 0;
  for (const auto& f : forms) {
    const auto got = extract_root_verb(f.word, table);
    const auto want = testing::oracle_root(f.word, table);
    if (got && want && got->root == want->root && got->tense == want->tense) ++agree;
    if (!got || got->root != f.root) ++constructed_root_differs;
  }
  return {agree == forms.size() && !forms.empty(),
          fmt("%zu/%zu constructed forms (%zu suffixes x 3 roots, impossible pairs skipped) match "
              "the longest-match oracle; %zu read differently from their constructed root",
              agree, forms.size(), table.entries().size(), constructed_root_differs)};
}

Outcome naive_bayes() {
  const auto m = train_naive_bayes(testing::nb_hand_dataset());
  const auto p = m.predict_proba(testing::make_fv({{0, 1}}));
  const double hand_error = std::max(std::abs(p[0] - 0.75), std::abs(p[1] - 0.25));

  Rng rng(8);
  double worst = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t vocab = 2 + rng.below(9);
    const Dataset d = testing::random_count_dataset(rng, 2 + rng.below(3), vocab, 12, 0);
    NaiveBayesOptions o;
    o.alpha = 0.5 + rng.unit();
    const auto model = train_naive_bayes(d, o);
    for (const auto& ex : d.examples) {
      const auto got = model.predict_proba(ex.features);
      const auto want = testing::direct_posterior(d, o.alpha, ex.features);
      for (std::size_t c = 0; c < want.size(); ++c) worst = std::max(worst, std::abs(got[c] - want[c]));
    }
  }
  return {hand_error <= 1e-9 && worst <= 1e-9,
          fmt("posterior (%.12f, %.12f); log-space vs direct product max diff %.2e over 40 "
              "vocabularies of 2..10 terms",
              p[0], p[1], worst)};
}

Outcome metrics() {
  const std::vector<CategoryIndex> t100(100, 0);
  const auto worked = compute_metrics(ConfusionMatrix::from_rows({{40, 10}, {20, 30}}), t100);
  const auto diagonal = compute_metrics(ConfusionMatrix::from_rows({{30, 0}, {0, 70}}), t100);
  const std::vector<std::vector<std::uint64_t>> independent_rows = {{6, 9, 15}, {4, 6, 10}, {10, 15, 25}};
  const auto independent = compute_metrics(ConfusionMatrix::from_rows(independent_rows), t100);
  const Split split = percentage_split(100, 70, 1, false);

  bool split_ok = split.train.size() == 70 && split.test.size() == 30;
  for (std::size_t i = 0; split_ok && i < 70; ++i) split_ok = split.train[i] == i;
  for (std::size_t i = 0; split_ok && i < 30; ++i) split_ok = split.test[i] == 70 + i;

  const bool ok = std::abs(worked.accuracy - 0.70) <= 1e-15 && worked.kappa &&
                  std::abs(*worked.kappa - 0.40) <= 1e-15 && diagonal.kappa &&
                  *diagonal.kappa == 1.0 && independent.kappa && std::abs(*independent.kappa) <= 1e-12 &&
                  std::abs(*independent.kappa - testing::oracle_kappa(independent_rows)) <= 1e-12 &&
                  split_ok;
  return {ok, fmt("accuracy %.17g, kappa %.17g; diagonal kappa %.17g; independent kappa %.3g; "
                  "70%% unshuffled split train %zu..%zu test %zu..%zu",
                  worked.accuracy, worked.kappa.value_or(NAN), diagonal.kappa.value_or(NAN),
                  independent.kappa.value_or(NAN), split.train.front(), split.train.back(),
                  split.test.front(), split.test.back())};
}

// One ensemble cross-validation trains the four models of every fold; the
// individual classifiers are then scored on the same folds by replaying
// those models, so nothing is trained twice.
Outcome classifier_quality() {
  const auto start = Clock::now();
  const Engine engine = testing::build_synthetic_engine(100, 7);
  const Dataset data = engine.dataset_for("");
  const ClassifierOptions options;
  const EnsembleConfig config;
  constexpr std::size_t kFolds = 10;
  constexpr std::uint64_t kSeed = 1;

  std::vector<NodeModels> fold_models;
  std::vector<std::size_t> fold_sizes;
  const TrainFn ensemble = [&](const Dataset& train) -> Predictor {
    fold_models.push_back(train_node_models(train, options));
    fold_sizes.push_back(train.examples.size());
    auto classifier = std::make_shared<EnsembleClassifier>(fold_models.back(), config);
    return [classifier](const FeatureVector& fv) { return classifier->predict_proba(fv); };
  };
  const CrossValidation ens = cross_validate(ensemble, data, kFolds, kSeed);

  double accuracy[kClassifierKindCount] = {};
  bool replay_ok = fold_models.size() == kFolds;
  for (std::size_t k = 0; k < kClassifierKindCount; ++k) {
    std::size_t next = 0;
    const TrainFn replay = [&](const Dataset& train) -> Predictor {
      replay_ok = replay_ok && next < fold_models.size() && fold_sizes[next] == train.examples.size();
      const Model* model = &fold_models.at(next++)[k];
      return [model](const FeatureVector& fv) { return predict_proba(*model, fv); };
    };
    accuracy[k] = cross_validate(replay, data, kFolds, ens.seed_used).average.accuracy;
  }
  const double elapsed = seconds_since(start);
  const double best = *std::max_element(std::begin(accuracy), std::end(accuracy));
  const double ensemble_accuracy = ens.average.accuracy;
  const bool ok = replay_ok && accuracy[0] >= 0.90 && accuracy[1] >= 0.90 && accuracy[2] >= 0.85 &&
                  accuracy[3] >= 0.85 && ensemble_accuracy >= best - 0.02 && elapsed < 120.0;
  return {ok, fmt("10-fold accuracy nb %.3f, svm %.3f, tree %.3f, mlp %.3f, ensemble %.3f "
                  "(%zu sentences, 7 categories), %.1f s",
                  accuracy[0], accuracy[1], accuracy[2], accuracy[3], ensemble_accuracy,
                  data.examples.size(), elapsed)};
}

const Engine& trained_qa_engine() {
  static const Engine engine = [] {
    Engine e = testing::build_qa_engine();
    e.train();
    return e;
  }();
  return engine;
}

Outcome question_answering() {
  const Engine& engine = trained_qa_engine();
  const auto queries = testing::load_qa_queries();
  std::size_t hits_at_5 = 0;
  std::size_t planted_rank_one = 0;
  std::string misses;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const Answer a = engine.query(queries[i].text);
    const auto& hits = a.trace.hits;
    const auto top5 = hits.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(5, hits.size()));
    const bool hit = std::any_of(hits.begin(), top5, [&](const Hit& h) { return h.id == queries[i].target; });
    hits_at_5 += hit;
    if (!hit) misses += " " + queries[i].target;
    // The first two queries are the cricket and football examples.
    if (i < 2 && !hits.empty() && hits.front().id == queries[i].target) ++planted_rank_one;
  }
  const double rate = queries.empty() ? 0.0 : static_cast<double>(hits_at_5) / queries.size();
  return {queries.size() == 20 && rate >= 0.90 && planted_rank_one == 2,
          fmt("hit@5 %zu/%zu (%.0f%%), planted examples at rank 1: %zu/2%s%s", hits_at_5,
              queries.size(), 100.0 * rate, planted_rank_one, misses.empty() ? "" : "; missed:",
              misses.c_str())};
}

Outcome mlp_checks() {
  Rng rng(2718);
  const MlpParameters p = testing::random_parameters(3, 4, 3, rng);
  const double worst = testing::worst_gradient_error(p, testing::gradient_fixture());
  MlpOptions o;
  o.hidden = 4;
  o.seed = 42;
  o.epochs = 5000;
  const Dataset xor_data = testing::xor_dataset();
  const auto m = train_mlp(xor_data, o);
  const double mse = mlp_mse(m.parameters(), testing::encoded(m, xor_data));
  return {worst <= 1e-4 && mse < 0.1,
          fmt("max relative gradient error %.2e on 3 examples; XOR MSE %.4f at seed 42", worst, mse)};
}

Outcome persistence() {
  const Engine& original = trained_qa_engine();
  const auto dir = std::filesystem::temp_directory_path() / "semsearch_acceptance_state";
  std::filesystem::remove_all(dir);
  save_state(original, dir);
  const Engine restored = load_state(dir);
  std::filesystem::remove_all(dir);

  const auto queries = testing::random_vocabulary_queries(original, 100, 99);
  std::size_t identical = 0;
  for (const auto& q : queries) {
    bool same = testing::answer_report(original.query(q)) == testing::answer_report(restored.query(q));
    const FeatureVector fv = original.process(q).features;
    for (const auto& [key, models] : original.models()) {
      const auto& other = restored.models().at(key);
      for (std::size_t k = 0; k < models.size(); ++k) {
        same = same && predict_proba(models[k], fv).probabilities ==
                           predict_proba(other[k], fv).probabilities;
      }
    }
    identical += same;
  }
  return {identical == queries.size(),
          fmt("%zu/%zu random queries give byte-identical reports and predict_proba at %zu nodes",
              identical, queries.size(), original.models().size())};
}

}  // namespace
}  // namespace semsearch

int main() {
  using semsearch::Outcome;
  struct Check {
    const char* name;
    std::function<Outcome()> run;
  };
  const Check checks[] = {
      {"vote rules", semsearch::vote_rules},
      {"morphology", semsearch::morphology},
      {"naive bayes", semsearch::naive_bayes},
      {"metrics", semsearch::metrics},
      {"classifier quality", semsearch::classifier_quality},
      {"question answering", semsearch::question_answering},
      {"mlp gradient", semsearch::mlp_checks},
      {"persistence", semsearch::persistence},
  };
  int failures = 0;
  int number = 0;
  for (const auto& check : checks) {
    Outcome outcome;
    try {
      outcome = check.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    failures += !outcome.pass;
    std::printf("%s %d %s: %s\n", outcome.pass ? "PASS" : "FAIL", ++number, check.name,
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
