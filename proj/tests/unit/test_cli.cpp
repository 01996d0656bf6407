#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "aispath/cli/app.hpp"
#include "aispath/cli/csv_ingest.hpp"
#include "aispath/cli/store.hpp"
#include "aispath/ensemble/bundle_io.hpp"
#include "aispath/harness/synth.hpp"
#include "support.hpp"

using namespace aispath;
using namespace aispath::cli;
namespace fs = std::filesystem;
using nlohmann::json;
using test::msg;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  args.insert(args.begin(), "--quiet");
  r.code = run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class Scratch {
 public:
  Scratch() {
    static int counter = 0;
    dir_ = fs::temp_directory_path() /
           ("aispath_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }
  std::string operator/(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

std::size_t line_count(const std::string& path) {
  std::ifstream in(path);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) n += !line.empty();
  return n;
}

std::vector<std::string> small_ensemble() {
  return {"--set", "ensemble.k_clusters=3", "--set", "ensemble.h_hidden=20", "--set", "ensemble.ridge=0.01",
          "--set", "ensemble.k_nn=10",     "--set", "ensemble.r_select=2"};
}

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// synth arc fleet -> featurize -> train; returns the bundle path
std::string trained_bundle(const Scratch& s, std::uint64_t seed = 3) {
  EXPECT_EQ(run_cli({"synth", "-o", s / "fleet", "--family", "arc", "--count", "12"}).code, kExitOk);
  EXPECT_EQ(run_cli({"featurize", s / "fleet", "-o", s / "samples"}).code, kExitOk);
  const auto r = run_cli(with({"--seed", std::to_string(seed), "train", s / "samples", "-o", s / "model.bin"},
                          small_ensemble()));
  EXPECT_EQ(r.code, kExitOk) << r.err;
  return s / "model.bin";
}

void write_window(const std::string& path, std::vector<AisMessage> msgs) {
  Trajectory t = test::make_trajectory(std::move(msgs));
  write_ais_csv(path, std::span<const Trajectory>(&t, 1));
}

std::vector<AisMessage> synth_window(std::size_t l) {
  SynthConfig sc;
  sc.family = RouteFamily::arc;
  sc.count = 1;
  sc.seed = 77;
  const auto t = synth_generate(sc).trajectories.front();
  return {t.messages.begin() + 10, t.messages.begin() + 10 + static_cast<std::ptrdiff_t>(l)};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

const char* kHeader = "MMSI,BaseDateTime,LAT,LON,SOG,COG,Heading,VesselType,Length,Width,Draft\n";

}  // namespace

TEST(Cli, UsageErrorsAreConfigErrors) {
  EXPECT_EQ(run_cli({"frobnicate"}).code, kExitConfig);
  EXPECT_EQ(run_cli({}).code, kExitConfig);
  Scratch s;
  EXPECT_EQ(run_cli({"--set", "preprocess.no_such_key=1", "synth", "-o", s / "x"}).code, kExitConfig);
  EXPECT_EQ(run_cli({"--set", "ensemble.ridge=-1", "synth", "-o", s / "x"}).code, kExitConfig);
  write_text(s / "bad.json", R"({"outlier": {"delta_theta": 60, "typo": 1}})");
  EXPECT_EQ(run_cli({"--config", s / "bad.json", "synth", "-o", s / "x"}).code, kExitConfig);
  EXPECT_EQ(run_cli({"--config", s / "missing.json", "synth", "-o", s / "x"}).code, kExitIo);
}

TEST(Cli, MissingStoreIsIoErrorAndEmptyStoreIsDataError) {
  Scratch s;
  EXPECT_EQ(run_cli({"preprocess", s / "nowhere", "-o", s / "out"}).code, kExitIo);
  write_store(s / "empty", {}, "ingest");
  const auto r = run_cli({"preprocess", s / "empty", "-o", s / "out"});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("no trajectories"), std::string::npos);
}

TEST(Cli, CleanFleetNeedsNoRepairs) {
  Scratch s;
  ASSERT_EQ(run_cli({"synth", "-o", s / "fleet", "--family", "straight", "--count", "10"}).code, kExitOk);
  const auto r = run_cli({"preprocess", s / "fleet", "-o", s / "clean"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json counts = json::parse(r.out);
  EXPECT_EQ(counts["repaired_sog"], 0);
  EXPECT_EQ(counts["interpolated_points"], 0);
  EXPECT_EQ(counts["dropped_duplicate_time"], 0);
  EXPECT_EQ(counts["front_truncated"], 0);
  EXPECT_EQ(counts["trajectories"], 10);
  EXPECT_TRUE(fs::exists(s / "clean/manifest.json"));
  EXPECT_EQ(read_store(s / "clean").size(), 10u);
}

TEST(Cli, OutliersFindEveryInjectedLoop) {
  Scratch s;
  ASSERT_EQ(run_cli({"synth", "-o", s / "fleet", "--family", "loop-injected", "--count", "15"}).code, kExitOk);
  const std::size_t injected = line_count(s / "fleet/truth.csv") - 1;
  ASSERT_EQ(injected, 15u);
  const auto r = run_cli({"outliers", s / "fleet", "-o", s / "cut"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json counts = json::parse(r.out);
  EXPECT_EQ(counts["anomalies"], injected);
  EXPECT_EQ(counts["self_crossings"], injected);
  EXPECT_EQ(line_count(s / "cut/anomalies.csv") - 1, injected);
}

TEST(Cli, FeaturizeNineMessagesGivesOneSample) {
  Scratch s;
  std::vector<AisMessage> m;
  for (int k = 0; k < 8; ++k) m.push_back(msg(60.0 * k, 10.0 + 0.002 * k, 20.0 + 0.002 * k));
  m.push_back(msg(7 * 60.0 + 1800.0, 10.1, 20.1));
  const Trajectory t = test::make_trajectory(m);
  write_store(s / "one", std::span<const Trajectory>(&t, 1), "preprocess");
  const auto r = run_cli({"featurize", s / "one", "-o", s / "samples"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(json::parse(r.out)["samples"], 1);
  EXPECT_EQ(read_samples(s / "samples").pairs.size(), 1u);
}

TEST(Cli, TrainIsReproducible) {
  Scratch s;
  ASSERT_EQ(run_cli({"synth", "-o", s / "fleet", "--family", "arc", "--count", "12"}).code, kExitOk);
  ASSERT_EQ(run_cli({"featurize", s / "fleet", "-o", s / "samples"}).code, kExitOk);
  const auto a = run_cli(with({"--seed", "5", "train", s / "samples", "-o", s / "a.bin"}, small_ensemble()));
  const auto b = run_cli(with({"--seed", "5", "train", s / "samples", "-o", s / "b.bin"}, small_ensemble()));
  ASSERT_EQ(a.code, kExitOk) << a.err;
  ASSERT_EQ(b.code, kExitOk) << b.err;
  const auto digest = [](const std::string& line) { return line.substr(line.find("sha256")); };
  EXPECT_EQ(digest(a.out), digest(b.out));
  EXPECT_TRUE(fs::exists(s / "a.bin.manifest.json"));
  const auto c = run_cli(with({"--seed", "6", "train", s / "samples", "-o", s / "c.bin"}, small_ensemble()));
  EXPECT_NE(digest(a.out), digest(c.out));
}

TEST(Cli, TrainRefusesTooFewSamples) {
  Scratch s;
  std::vector<AisMessage> m;
  for (int k = 0; k < 8; ++k) m.push_back(msg(60.0 * k, 10.0 + 0.002 * k, 20.0 + 0.002 * k));
  m.push_back(msg(7 * 60.0 + 1800.0, 10.1, 20.1));
  const Trajectory t = test::make_trajectory(m);
  write_store(s / "one", std::span<const Trajectory>(&t, 1), "preprocess");
  ASSERT_EQ(run_cli({"featurize", s / "one", "-o", s / "samples"}).code, kExitOk);
  const auto r = run_cli(with({"train", s / "samples", "-o", s / "m.bin"}, small_ensemble()));
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("k_clusters"), std::string::npos);
}

TEST(Cli, PredictReportsNormalizedWeights) {
  Scratch s;
  const auto bundle = trained_bundle(s);
  write_window(s / "w.csv", synth_window(8));
  const auto r = run_cli({"predict", bundle, "--window", s / "w.csv", "--json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_TRUE(std::isfinite(j["lat"].get<double>()));
  EXPECT_TRUE(std::isfinite(j["lon"].get<double>()));
  EXPECT_EQ(j["horizon_s"], 1800.0);
  double total = 0.0;
  for (const auto& m : j["models"]) total += m["weight"].get<double>();
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_GE(j["models"].size(), 1u);
  EXPECT_LE(j["models"].size(), 2u);

  // same answer as the library on the same bundle
  const auto b = load_bundle(bundle);
  auto win = synth_window(8);
  const auto p = predict_position(win, win.front().meta, b);
  EXPECT_NEAR(j["lat"].get<double>(), p.position.lat, 1e-9);
  EXPECT_NEAR(j["lon"].get<double>(), p.position.lon, 1e-9);

  const auto text = run_cli({"predict", bundle, "--window", s / "w.csv", "--horizon", "1800"});
  EXPECT_EQ(text.code, kExitOk);
  EXPECT_EQ(text.out.rfind("lat ", 0), 0u);
}

TEST(Cli, PredictRefusals) {
  Scratch s;
  const auto bundle = trained_bundle(s);

  auto w = synth_window(8);
  w[1].lat = w[0].lat;
  w[1].lon = w[0].lon;
  write_window(s / "degenerate.csv", w);
  EXPECT_EQ(run_cli({"predict", bundle, "--window", s / "degenerate.csv"}).code, kExitData);

  write_window(s / "short.csv", synth_window(5));
  EXPECT_EQ(run_cli({"predict", bundle, "--window", s / "short.csv"}).code, kExitData);

  write_window(s / "ok.csv", synth_window(8));
  EXPECT_EQ(run_cli({"predict", bundle, "--window", s / "ok.csv", "--horizon", "900"}).code, kExitConfig);
  EXPECT_EQ(run_cli({"predict", s / "missing.bin", "--window", s / "ok.csv"}).code, kExitIo);

  write_text(s / "garbage.bin", "not a bundle at all");
  EXPECT_EQ(run_cli({"predict", s / "garbage.bin", "--window", s / "ok.csv"}).code, kExitData);

  write_text(s / "rows.csv", std::string(kHeader) + "123,not-a-time,1,2,3,4,511,70,,,\n");
  EXPECT_EQ(run_cli({"predict", bundle, "--window", s / "rows.csv"}).code, kExitData);
}

TEST(Cli, EvaluateReportShapes) {
  Scratch s;
  ASSERT_EQ(run_cli({"synth", "-o", s / "fleet", "--family", "arc", "--count", "20"}).code, kExitOk);
  const auto eval = with({"--set", "eval.folds=2"}, small_ensemble());
  const auto full = run_cli(with(eval, {"evaluate", s / "fleet", "-o", s / "report.csv"}));
  ASSERT_EQ(full.code, kExitOk) << full.err;
  EXPECT_EQ(line_count(s / "report.csv"), 13u);
  EXPECT_EQ(line_count(s / "report.csv"), std::count(full.out.begin(), full.out.end(), '\n'));

  const auto lin = run_cli(with(eval, {"--set", R"(eval.methods=["linear"])", "evaluate", s / "fleet", "-o",
                                   s / "linear.csv"}));
  ASSERT_EQ(lin.code, kExitOk) << lin.err;
  std::ifstream in(s / "linear.csv");
  std::string line;
  std::getline(in, line);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(line.rfind("linear,", 0), 0u) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 4u);
}

TEST(Cli, PlotDataPairsTruthAndPrediction) {
  Scratch s;
  ASSERT_EQ(run_cli({"synth", "-o", s / "fleet", "--family", "straight", "--count", "4"}).code, kExitOk);
  const auto r = run_cli({"--set", "eval.folds=2", "--set", R"(eval.methods=["sogcog"])", "--set",
                      "eval.horizons=[1800]", "evaluate", s / "fleet", "-o", s / "r.csv", "--plot-data",
                      s / "plot.csv"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::ifstream in(s / "plot.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "trajectory_id,method,horizon_s,track,seq,lat,lon");
  std::map<std::string, std::pair<std::size_t, std::size_t>> per;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string id, method, horizon, track;
    std::getline(ss, id, ',');
    std::getline(ss, method, ',');
    std::getline(ss, horizon, ',');
    std::getline(ss, track, ',');
    auto& c = per[id];
    (track == "truth" ? c.first : c.second)++;
  }
  EXPECT_EQ(per.size(), 4u);
  for (const auto& [id, c] : per) {
    EXPECT_GT(c.first, 0u) << id;
    EXPECT_EQ(c.first, c.second) << id;
  }
}

TEST(Cli, DeterministicAcrossRuns) {
  Scratch s;
  ASSERT_EQ(run_cli({"--seed", "9", "synth", "-o", s / "a", "--family", "s-curve", "--count", "5"}).code, kExitOk);
  ASSERT_EQ(run_cli({"--seed", "9", "synth", "-o", s / "b", "--family", "s-curve", "--count", "5"}).code, kExitOk);
  const auto a = read_store(s / "a");
  const auto b = read_store(s / "b");
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].messages, b[i].messages);
}

TEST(Ingest, SplitsVoyagesAtLongGaps) {
  Scratch s;
  std::string csv = kHeader;
  const char* times[] = {"2020-01-01T00:00:00", "2020-01-01T00:01:00", "2020-01-01T00:02:00",
                         "2020-01-01T03:02:00", "2020-01-01T03:03:00", "2020-01-01T03:04:00"};
  for (int k = 0; k < 6; ++k)
    csv += "366000001," + std::string(times[k]) + "," + std::to_string(40.0 + 0.003 * k) +
           ",-70.0,10.0,0.0,511,70,200,30,10\n";
  write_text(s / "in.csv", csv);
  const auto r = run_cli({"--set", "ingest.split_gap=7200", "ingest", s / "in.csv", "-o", s / "store"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto store = read_store(s / "store");
  ASSERT_EQ(store.size(), 2u);
  EXPECT_EQ(store[0].size(), 3u);
  EXPECT_EQ(store[1].size(), 3u);
  EXPECT_EQ(store[0].id, "366000001-0");
  EXPECT_EQ(store[1].id, "366000001-1");
  EXPECT_EQ(*store[0].meta.length, 200.0);
}

TEST(Ingest, SortsRowsAndSeparatesVessels) {
  Scratch s;
  std::string csv = kHeader;
  // interleaved vessels, each out of order
  csv += "2,2020-01-01T00:02:00,41.02,-70,10,90,511,70,,,\n";
  csv += "1,2020-01-01T00:01:00,40.01,-70,10,0,45,70,,,\n";
  csv += "2,2020-01-01T00:00:00,41.00,-70,10,90,511,70,,,\n";
  csv += "1,2020-01-01T00:00:00,40.00,-70,10,0,45,70,,,\n";
  csv += "2,2020-01-01T00:01:00,41.01,-70,10,90,511,70,,,\n";
  csv += "1,2020-01-01T00:02:00,40.02,-70,10,0,45,70,,,\n";
  csv += "1,garbage,40.03,-70,10,0,45,70,,,\n";
  write_text(s / "in.csv", csv);
  const auto r = run_cli({"ingest", s / "in.csv", "-o", s / "store"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("(1 skipped)"), std::string::npos) << r.out;
  const auto store = read_store(s / "store");
  ASSERT_EQ(store.size(), 2u);
  for (const auto& t : store) {
    ASSERT_EQ(t.size(), 3u);
    for (std::size_t k = 1; k < t.size(); ++k) EXPECT_GT(t.messages[k].tau, t.messages[k - 1].tau);
    for (const auto& m : t.messages) EXPECT_EQ(m.mmsi, t.messages.front().mmsi);
  }
  const auto& v2 = store[0].messages.front().mmsi == 2 ? store[0] : store[1];
  for (const auto& m : v2.messages) EXPECT_FALSE(m.heading.has_value());
  const auto& v1 = store[0].messages.front().mmsi == 1 ? store[0] : store[1];
  EXPECT_EQ(*v1.messages.front().heading, 45.0);
  EXPECT_FALSE(v1.meta.length.has_value());
  const json manifest = json::parse(std::ifstream(s / "store/manifest.json"));
  EXPECT_EQ(manifest["counts"]["skipped_rows"], 1);
  EXPECT_EQ(manifest["inputs"].size(), 1u);
}

TEST(Ingest, MissingFileIsIoError) {
  Scratch s;
  EXPECT_EQ(run_cli({"ingest", s / "absent.csv", "-o", s / "store"}).code, kExitIo);
}

TEST(Ingest, SynthCsvRoundTrip) {
  Scratch s;
  ASSERT_EQ(run_cli({"synth", "-o", s / "fleet", "--family", "arc", "--count", "3", "--csv", s / "fleet.csv"}).code,
            kExitOk);
  ASSERT_EQ(run_cli({"ingest", s / "fleet.csv", "-o", s / "store"}).code, kExitOk);
  const auto a = read_store(s / "fleet");
  const auto b = read_store(s / "store");
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].size(), b[i].size());
    EXPECT_NEAR(a[i].messages.back().lat, b[i].messages.back().lat, 1e-9);
    EXPECT_NEAR(a[i].messages.back().tau, b[i].messages.back().tau, 1e-6);
  }
}
