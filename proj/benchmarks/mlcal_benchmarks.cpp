#include <benchmark/benchmark.h>

#include "mlcal/calibration.hpp"
#include "mlcal/features.hpp"
#include "mlcal/linear_model.hpp"
#include "mlcal/random.hpp"
#include "mlcal/splitter.hpp"
#include "mlcal/synthetic.hpp"

namespace {

using namespace mlcal;

Dataset corpus(std::size_t n) {
  SyntheticSpec spec;
  spec.schema = LabelSchema::preset("subtask2");
  spec.instances = n;
  spec.rates = {0.357, 0.10, 0.05, 0.022, 0.08};
  spec.noise = 0.1;
  return generate_synthetic(spec);
}

void BM_Preprocess(benchmark::State& state) {
  const std::string raw = "@user Check THIS out \U0001F60A #Hope https://t.co/abc so GOOD \U0001F602";
  const PreprocessConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(preprocess(raw, cfg));
}
BENCHMARK(BM_Preprocess);

void BM_Featurize(benchmark::State& state) {
  const auto ds = corpus(256);
  const FeaturizerConfig cfg;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(featurize(ds.instances[i++ % ds.size()].text, cfg));
  }
}
BENCHMARK(BM_Featurize);

void BM_IterativeSplit(benchmark::State& state) {
  const auto ds = corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(iterative_stratified_split(ds, {0.2, 42}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IterativeSplit)->Arg(1000)->Arg(4000);

void BM_TrainEpoch(benchmark::State& state) {
  const auto ds = corpus(3000);
  const auto s = iterative_stratified_split(ds, {0.2, 42});
  TrainConfig t;
  t.max_epochs = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(train(s.train, s.val, t, FeaturizerConfig{}, WeightingMode::None));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.train.size()));
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

void BM_Tune(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  ProbabilityMatrix pm;
  pm.schema = LabelSchema::preset("subtask2");
  BitMatrix gold(n, pm.cols());
  for (std::size_t r = 0; r < n; ++r) {
    pm.ids.push_back(std::to_string(r));
    for (std::size_t c = 0; c < pm.cols(); ++c) {
      const bool g = rng.bernoulli(0.1);
      gold.at(r, c) = g;
      pm.probs.push_back(g ? 0.2 + 0.8 * rng.unit() : 0.6 * rng.unit());
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(tune(pm, gold));
}
BENCHMARK(BM_Tune)->Arg(600)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
