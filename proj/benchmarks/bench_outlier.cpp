#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "aispath/harness/synth.hpp"
#include "aispath/outlier/anomaly.hpp"
#include "aispath/outlier/rdp.hpp"

using namespace aispath;

namespace {

std::vector<GeoPoint> random_walk(std::size_t n) {
  std::mt19937_64 eng(7);
  std::normal_distribution<double> turn(0.0, 0.3);
  std::vector<GeoPoint> pts;
  double lat = 35, lon = -70, hdg = 0;
  for (std::size_t k = 0; k < n; ++k) {
    hdg += turn(eng);
    lat += 0.01 * std::cos(hdg);
    lon += 0.01 * std::sin(hdg);
    pts.push_back({lat, lon});
  }
  return pts;
}

}  // namespace

static void BM_Rdp2(benchmark::State& state) {
  const auto pts = random_walk(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(rdp2_control_points(pts, 0.01, std::numeric_limits<double>::infinity()));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Rdp2)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

static void BM_ClassicRdp(benchmark::State& state) {
  const auto pts = random_walk(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(classic_rdp(pts, 0.01));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ClassicRdp)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

static void BM_DetectAnomalies(benchmark::State& state) {
  SynthConfig sc;
  sc.family = RouteFamily::loop_injected;
  sc.count = 1;
  sc.duration_s = static_cast<double>(state.range(0)) * 60.0;
  const auto t = synth_generate(sc).trajectories.front();
  for (auto _ : state) benchmark::DoNotOptimize(detect_anomalies(t, OutlierConfig{}));
}
BENCHMARK(BM_DetectAnomalies)->Arg(180)->Arg(1440);
