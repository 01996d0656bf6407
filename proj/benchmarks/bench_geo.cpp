#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "aispath/domain/geo.hpp"
#include "aispath/featurize/frame.hpp"
#include "aispath/harness/synth.hpp"

using namespace aispath;

static void BM_GeoDistance(benchmark::State& state) {
  std::mt19937_64 eng(1);
  std::uniform_real_distribution<double> lat(-90, 90), lon(-180, 180);
  std::vector<GeoPoint> pts(1024);
  for (auto& p : pts) p = {lat(eng), lon(eng)};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(geo_distance(pts[i & 1023], pts[(i + 1) & 1023]));
    ++i;
  }
}
BENCHMARK(BM_GeoDistance);

static void BM_LocalTransform(benchmark::State& state) {
  SynthConfig sc;
  sc.family = RouteFamily::arc;
  sc.count = 1;
  const auto t = synth_generate(sc).trajectories.front();
  const std::span<const AisMessage> w(t.messages.data(), 8);
  for (auto _ : state) benchmark::DoNotOptimize(local_transform(w));
}
BENCHMARK(BM_LocalTransform);
