#include "aispath/cli/app.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "aispath/cli/config.hpp"
#include "aispath/cli/csv_ingest.hpp"
#include "aispath/cli/format.hpp"
#include "aispath/cli/log.hpp"
#include "aispath/cli/manifest.hpp"
#include "aispath/cli/stages.hpp"
#include "aispath/cli/store.hpp"
#include "aispath/domain/errors.hpp"
#include "aispath/domain/geo.hpp"
#include "aispath/ensemble/bundle_io.hpp"
#include "aispath/harness/kfold.hpp"
#include "aispath/harness/synth.hpp"

#ifndef AISPATH_VERSION
#define AISPATH_VERSION "0.0.0"
#endif

namespace aispath::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Globals {
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::vector<std::string> overrides;
  bool quiet = false;
};

AppConfig resolve(const Globals& g, std::vector<std::string> extra = {}) {
  std::vector<std::string> sets = g.overrides;
  for (auto& e : extra) sets.push_back(std::move(e));
  if (g.seed) sets.push_back("seed=" + std::to_string(*g.seed));
  if (g.jobs) sets.push_back("jobs=" + std::to_string(*g.jobs));
  const fs::path file = g.config_file;
  return load_config(g.config_file.empty() ? nullptr : &file, sets);
}

RunManifest manifest_for(const std::string& command, const AppConfig& cfg) {
  RunManifest m;
  m.tool_version = AISPATH_VERSION;
  m.command = command;
  m.config = to_json(cfg);
  m.seeds["seed"] = cfg.seed;
  return m;
}

json filter_counts(const FilterReport& r, std::size_t discarded, std::size_t kept) {
  return {{"front_truncated", r.front_truncated},
          {"dropped_duplicate_time", r.dropped_duplicate_time},
          {"dropped_invalid_position", r.dropped_invalid_position},
          {"repaired_sog", r.repaired_sog},
          {"interpolated_points", r.interpolated_points},
          {"discarded_trajectories", discarded},
          {"trajectories", kept}};
}

int cmd_ingest(const Globals& g, const std::vector<std::string>& inputs, const std::string& out_dir,
               std::ostream& out) {
  const AppConfig cfg = resolve(g);
  auto t0 = Clock::now();
  std::vector<fs::path> paths(inputs.begin(), inputs.end());
  for (const auto& p : paths)
    if (!fs::exists(p)) throw std::ios_base::failure("input file " + p.string() + " does not exist");
  IngestStats stats;
  const auto trajectories = ingest(paths, cfg.ingest, stats);
  write_store(out_dir, trajectories, "ingest");
  RunManifest m = manifest_for("ingest", cfg);
  for (const auto& p : paths) m.add_input(p);
  m.timings["ingest"] = since(t0);
  m.counts = {{"rows", stats.rows},
              {"skipped_rows", stats.skipped},
              {"vessels", stats.vessels},
              {"trajectories", stats.trajectories},
              {"short_dropped", stats.short_dropped}};
  m.add_output(out_dir);
  m.write_for(out_dir);
  out << "ingested " << stats.rows << " rows (" << stats.skipped << " skipped) into "
      << stats.trajectories << " trajectories\n";
  return kExitOk;
}

int cmd_preprocess(const Globals& g, const std::string& in_dir, const std::string& out_dir,
                   std::ostream& out) {
  const AppConfig cfg = resolve(g);
  auto t0 = Clock::now();
  const auto input = read_store(in_dir);
  const auto res = run_preprocess(input, cfg.preprocess, cfg.jobs);
  write_store(out_dir, res.trajectories, "preprocess");
  RunManifest m = manifest_for("preprocess", cfg);
  m.add_input(in_dir);
  m.timings["preprocess"] = since(t0);
  m.counts = filter_counts(res.totals, res.discarded, res.trajectories.size());
  m.add_output(out_dir);
  m.write_for(out_dir);
  out << m.counts.dump() << '\n';
  return kExitOk;
}

int cmd_outliers(const Globals& g, const std::string& in_dir, const std::string& out_dir,
                 std::ostream& out) {
  const AppConfig cfg = resolve(g);
  auto t0 = Clock::now();
  const auto input = read_store(in_dir);
  const auto res = run_outliers(input, cfg.outlier, cfg.jobs);
  write_store(out_dir, res.trajectories, "outliers");
  write_anomalies(fs::path(out_dir) / "anomalies.csv", res.anomalies);
  RunManifest m = manifest_for("outliers", cfg);
  m.add_input(in_dir);
  m.timings["outliers"] = since(t0);
  m.counts = {{"anomalies", res.anomalies.size()},
              {"sharp_turns", res.sharp_turns},
              {"self_crossings", res.self_crossings},
              {"trajectories_in", input.size()},
              {"trajectories_out", res.trajectories.size()}};
  m.add_output(out_dir);
  m.write_for(out_dir);
  out << m.counts.dump() << '\n';
  return kExitOk;
}

int cmd_featurize(const Globals& g, const std::string& in_dir, const std::string& out_dir,
                  std::ostream& out) {
  const AppConfig cfg = resolve(g);
  auto t0 = Clock::now();
  const auto input = read_store(in_dir);
  const auto res = run_featurize(input, cfg.sample, cfg.side_info, cfg.jobs);
  write_samples(out_dir, res.samples);
  RunManifest m = manifest_for("featurize", cfg);
  m.add_input(in_dir);
  m.timings["featurize"] = since(t0);
  m.counts = {{"samples", res.samples.pairs.size()},
              {"windows", res.stats.windows},
              {"degenerate_windows", res.stats.degenerate}};
  m.add_output(out_dir);
  m.write_for(out_dir);
  out << m.counts.dump() << '\n';
  return kExitOk;
}

int cmd_train(const Globals& g, const std::string& samples_dir, const std::string& bundle_path,
              std::ostream& out) {
  const AppConfig cfg = resolve(g);
  auto t0 = Clock::now();
  const SampleSet set = read_samples(samples_dir);
  if (set.pairs.empty()) throw DataError("no samples in " + samples_dir);
  TrainReport report;
  const ModelBundle bundle =
      train_ensemble(set.pairs, set.sample, set.side_info, cfg.ensemble, cfg.seed, &report);
  save_bundle(bundle, bundle_path);
  RunManifest m = manifest_for("train", cfg);
  m.add_input(samples_dir);
  m.timings["train"] = since(t0);
  m.counts = {{"samples", report.samples},
              {"models", bundle.models.size()},
              {"merged_clusters", report.merged_clusters},
              {"kmeans_iterations", report.kmeans_iterations},
              {"mean_training_residual_deg", report.mean_training_residual}};
  m.add_output(bundle_path);
  m.write_for(bundle_path);
  out << "bundle " << bundle_path << " sha256 " << m.outputs.front().second << " models "
      << bundle.models.size() << '\n';
  return kExitOk;
}

int cmd_predict(const Globals& g, const std::string& bundle_path, const std::string& window_csv,
                std::optional<double> horizon, bool as_json, std::ostream& out) {
  const AppConfig cfg = resolve(g);
  const ModelBundle bundle = load_bundle(bundle_path);
  if (horizon && std::abs(*horizon - bundle.sample.tau_t) > 1e-9)
    throw ConfigError("bundle predicts " + fmt(bundle.sample.tau_t) + " s ahead, not " + fmt(*horizon) +
                      " s; train a bundle for that horizon");
  IngestStats stats;
  auto rows = read_ais_csv(window_csv, cfg.ingest, stats);
  if (stats.skipped > 0) throw DataError(window_csv + ": window has unparseable rows");
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.tau < b.tau; });
  if (rows.empty()) throw DataError(window_csv + ": empty window");
  for (auto& r : rows) {
    r.cog = normalize_degrees(r.cog);
    r.cog_sine = std::sin(deg2rad(r.cog));
  }
  const Prediction p = predict_position(rows, rows.front().meta, bundle);
  if (as_json) {
    json models = json::array();
    for (std::size_t i = 0; i < p.selected.size(); ++i)
      models.push_back({{"model", p.selected[i].model},
                        {"error", p.selected[i].error},
                        {"neighbors", p.selected[i].neighbors},
                        {"weight", p.fusion.weights[i]},
                        {"local", {p.model_outputs[i].x(), p.model_outputs[i].y()}}});
    json j = {{"lat", p.position.lat},
              {"lon", p.position.lon},
              {"horizon_s", bundle.sample.tau_t},
              {"local", {p.local.x(), p.local.y()}},
              {"sigma", p.fusion.sigma},
              {"unweighted_fallback", p.fusion.unweighted_fallback},
              {"models", models}};
    out << j.dump(2) << '\n';
  } else {
    out << "lat " << fmt(p.position.lat) << " lon " << fmt(p.position.lon) << " horizon_s "
        << fmt(bundle.sample.tau_t) << '\n';
    for (std::size_t i = 0; i < p.selected.size(); ++i)
      out << "model " << p.selected[i].model << " error " << fmt(p.selected[i].error) << " weight "
          << fmt(p.fusion.weights[i]) << '\n';
    if (p.fusion.unweighted_fallback) out << "all fusion weights underflowed; unweighted mean used\n";
  }
  return kExitOk;
}

int cmd_evaluate(const Globals& g, const std::string& in_dir, const std::string& report_path,
                 const std::string& plot_path, std::ostream& out) {
  std::vector<std::string> extra;
  if (!plot_path.empty()) extra.push_back("eval.plot_data=true");
  const AppConfig cfg = resolve(g, extra);
  auto t0 = Clock::now();
  const auto input = read_store(in_dir);
  if (input.empty()) throw DataError("input store holds no trajectories");
  const PipelineConfig pipeline{cfg.sample, cfg.side_info, cfg.ensemble};
  const EvalReport report = kfold_evaluate(input, cfg.eval, pipeline);
  for (const auto& w : report.warnings) log_warn(w);
  {
    std::ofstream f(report_path, std::ios::trunc);
    if (!f) throw std::ios_base::failure("cannot write " + report_path);
    report.write_csv(f);
  }
  RunManifest m = manifest_for("evaluate", cfg);
  m.add_input(in_dir);
  if (!plot_path.empty()) {
    std::ofstream f(plot_path, std::ios::trunc);
    if (!f) throw std::ios_base::failure("cannot write " + plot_path);
    report.write_plot_csv(f);
    f.close();
    m.add_output(plot_path);
  }
  m.timings["evaluate"] = since(t0);
  m.counts = {{"rows", report.rows.size()},
              {"skipped_samples", report.skipped_samples},
              {"warnings", report.warnings.size()}};
  m.add_output(report_path);
  m.write_for(report_path);
  report.write_csv(out);
  return kExitOk;
}

int cmd_synth(const Globals& g, const std::string& out_dir, const std::string& family,
              std::optional<std::size_t> count, const std::string& csv_path, std::ostream& out) {
  std::vector<std::string> extra;
  if (!family.empty()) extra.push_back("synth.family=\"" + family + "\"");
  if (count) extra.push_back("synth.count=" + std::to_string(*count));
  const AppConfig cfg = resolve(g, extra);
  auto t0 = Clock::now();
  const SynthFleet fleet = synth_generate(cfg.synth);
  write_store(out_dir, fleet.trajectories, "synth");
  {
    std::vector<AnomalyRecord> truth;
    for (const auto& a : fleet.anomalies)
      truth.push_back({fleet.trajectories[a.trajectory].id, {a.kind, a.first, a.last, a.measure}});
    write_anomalies(fs::path(out_dir) / "truth.csv", truth);
  }
  RunManifest m = manifest_for("synth", cfg);
  if (!csv_path.empty()) {
    write_ais_csv(csv_path, fleet.trajectories);
    m.add_output(csv_path);
  }
  m.timings["synth"] = since(t0);
  m.counts = {{"trajectories", fleet.trajectories.size()}, {"anomalies", fleet.anomalies.size()}};
  m.add_output(out_dir);
  m.write_for(out_dir);
  out << "wrote " << fleet.trajectories.size() << " " << to_string(cfg.synth.family)
      << " trajectories to " << out_dir << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"AIS trajectory filtering, feature building and path prediction", "aispath"};
  app.require_subcommand(1);
  app.set_version_flag("--version", AISPATH_VERSION);
  Globals g;
  app.add_option("--config", g.config_file, "JSON config file (layered over defaults)");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--set", g.overrides, "Config override section.key=value (repeatable)");
  app.add_flag("-q,--quiet", g.quiet, "Only print errors");
  app.fallthrough();

  std::vector<std::string> inputs;
  std::string in_dir, out_path, bundle_path, window_csv, plot_path, family, csv_path;
  std::optional<double> horizon;
  std::optional<std::size_t> count;
  bool as_json = false;

  auto* ingest_cmd = app.add_subcommand("ingest", "Group CSV rows into per-voyage trajectories");
  ingest_cmd->add_option("inputs", inputs, "AIS CSV files")->required();
  ingest_cmd->add_option("-o,--out", out_path, "Output store directory")->required();

  auto stage = [&](const char* name, const char* help) {
    auto* c = app.add_subcommand(name, help);
    c->add_option("input", in_dir, "Input store directory")->required();
    c->add_option("-o,--out", out_path, "Output directory")->required();
    return c;
  };
  auto* pre_cmd = stage("preprocess", "Filter, repair and interpolate trajectories");
  auto* out_cmd = stage("outliers", "Detect sharp turns and small loops and cut them out");
  auto* feat_cmd = stage("featurize", "Build windowed training samples");

  auto* train_cmd = app.add_subcommand("train", "Train the ensemble from featurized samples");
  train_cmd->add_option("samples", in_dir, "Samples directory")->required();
  train_cmd->add_option("-o,--out", out_path, "Bundle file")->required();

  auto* pred_cmd = app.add_subcommand("predict", "Predict the position one horizon ahead");
  pred_cmd->add_option("bundle", bundle_path, "Bundle file")->required();
  pred_cmd->add_option("--window", window_csv, "CSV with the l most recent messages")->required();
  pred_cmd->add_option("--horizon", horizon, "Horizon in seconds; must match the bundle");
  pred_cmd->add_flag("--json", as_json, "Machine-readable output");

  auto* eval_cmd = app.add_subcommand("evaluate", "k-fold evaluation against baselines");
  eval_cmd->add_option("input", in_dir, "Trajectory store")->required();
  eval_cmd->add_option("-o,--out", out_path, "Report CSV")->required();
  eval_cmd->add_option("--plot-data", plot_path, "Also write truth/prediction tracks to this CSV");

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic fleet");
  synth_cmd->add_option("-o,--out", out_path, "Output store directory")->required();
  synth_cmd->add_option("--family", family, "straight, arc, s-curve, loop-injected, sharp-turn-injected");
  synth_cmd->add_option("--count", count, "Trajectory count");
  synth_cmd->add_option("--csv", csv_path, "Also write the fleet as raw AIS CSV");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  set_log_level(g.quiet ? LogLevel::quiet : LogLevel::info);

  try {
    if (ingest_cmd->parsed()) return cmd_ingest(g, inputs, out_path, out);
    if (pre_cmd->parsed()) return cmd_preprocess(g, in_dir, out_path, out);
    if (out_cmd->parsed()) return cmd_outliers(g, in_dir, out_path, out);
    if (feat_cmd->parsed()) return cmd_featurize(g, in_dir, out_path, out);
    if (train_cmd->parsed()) return cmd_train(g, in_dir, out_path, out);
    if (pred_cmd->parsed()) return cmd_predict(g, bundle_path, window_csv, horizon, as_json, out);
    if (eval_cmd->parsed()) return cmd_evaluate(g, in_dir, out_path, plot_path, out);
    if (synth_cmd->parsed()) return cmd_synth(g, out_path, family, count, csv_path, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::ios_base::failure& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace aispath::cli
