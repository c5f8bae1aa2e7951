#include <benchmark/benchmark.h>

#include "semsearch/engine.hpp"
#include "semsearch/model.hpp"
#include "semsearch/synthetic.hpp"

namespace semsearch {
namespace {

const Dataset& root_dataset() {
  static const Dataset d = [] {
    SyntheticOptions o;
    o.sentences_per_category = 30;
    return Engine::build(generate_synthetic_corpus(o), load_resources()).dataset_for("");
  }();
  return d;
}

void BM_Train(benchmark::State& state) {
  const auto kind = kAllClassifierKinds[state.range(0)];
  state.SetLabel(std::string(to_string(kind)));
  for (auto _ : state) benchmark::DoNotOptimize(train_model(kind, root_dataset()));
}
BENCHMARK(BM_Train)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_PredictProba(benchmark::State& state) {
  const auto kind = kAllClassifierKinds[state.range(0)];
  state.SetLabel(std::string(to_string(kind)));
  const Model model = train_model(kind, root_dataset());
  const auto& fv = root_dataset().examples.front().features;
  for (auto _ : state) benchmark::DoNotOptimize(predict_proba(model, fv));
}
BENCHMARK(BM_PredictProba)->DenseRange(0, 3);

}  // namespace
}  // namespace semsearch
