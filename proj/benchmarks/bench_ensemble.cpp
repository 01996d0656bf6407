#include <vector>

#include <benchmark/benchmark.h>

#include "aispath/ensemble/ensemble.hpp"
#include "aispath/featurize/dataset.hpp"
#include "aispath/harness/synth.hpp"

using namespace aispath;

namespace {

std::vector<TrainingPair> fleet_pairs(std::size_t count) {
  SynthConfig sc;
  sc.family = RouteFamily::arc;
  sc.count = count;
  sc.position_noise = 0.01;
  std::vector<TrainingPair> pairs;
  for (const auto& t : synth_generate(sc).trajectories) {
    auto p = make_training_pairs(t, SampleConfig{}, {});
    pairs.insert(pairs.end(), p.begin(), p.end());
  }
  return pairs;
}

EnsembleConfig bench_config() {
  EnsembleConfig c;
  c.k_clusters = 8;
  c.h_hidden = 100;
  c.ridge = 1e-2;
  return c;
}

}  // namespace

static void BM_TrainEnsemble(benchmark::State& state) {
  const auto pairs = fleet_pairs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(train_ensemble(pairs, SampleConfig{}, {}, bench_config(), 1));
  state.counters["samples"] = static_cast<double>(pairs.size());
}
BENCHMARK(BM_TrainEnsemble)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_PredictFeatures(benchmark::State& state) {
  const auto pairs = fleet_pairs(100);
  const auto bundle = train_ensemble(pairs, SampleConfig{}, {}, bench_config(), 1);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& p = pairs[i++ % pairs.size()];
    benchmark::DoNotOptimize(predict_features(p.features, p.frame, bundle));
  }
}
BENCHMARK(BM_PredictFeatures);
