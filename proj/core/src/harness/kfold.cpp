#include "aispath/harness/kfold.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ostream>
#include <set>
#include <stdexcept>

#include "aispath/domain/errors.hpp"
#include "aispath/domain/geo.hpp"
#include "aispath/harness/baselines.hpp"
#include "aispath/util/parallel.hpp"
#include "aispath/util/random.hpp"

namespace aispath {

namespace {

constexpr std::string_view kBuiltin[] = {"ensemble", "linear", "sogcog"};

std::string fmt_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Cell {
  std::vector<double> errors;
  double wall = 0.0;
};

struct FoldHorizon {
  std::vector<Cell> cells;  // per method
  std::vector<PlotTrack> tracks;
  std::vector<std::string> warnings;
  std::size_t skipped = 0;
};

}  // namespace

void EvalConfig::validate() const {
  if (horizons.empty()) throw ConfigError("eval.horizons must not be empty");
  for (double h : horizons)
    if (!(h > 0.0)) throw ConfigError("eval.horizons must be positive");
  if (folds < 2) throw ConfigError("eval.folds must be at least 2");
  std::set<std::string> seen;
  for (const auto& m : methods) {
    if (std::find(std::begin(kBuiltin), std::end(kBuiltin), m) == std::end(kBuiltin))
      throw ConfigError("unknown evaluation method '" + m + "'");
    if (!seen.insert(m).second) throw ConfigError("evaluation method '" + m + "' listed twice");
  }
}

const EvalRow* EvalReport::find(std::string_view method, double horizon_s) const {
  for (const auto& r : rows)
    if (r.method == method && r.horizon_s == horizon_s) return &r;
  return nullptr;
}

void EvalReport::write_csv(std::ostream& out) const {
  out << "method,horizon_s,mean_nmi,std_nmi,n,wallclock_s\n";
  for (const auto& r : rows)
    out << r.method << ',' << fmt_double(r.horizon_s) << ',' << fmt_double(r.mean_nmi) << ','
        << fmt_double(r.std_nmi) << ',' << r.n << ',' << fmt_double(r.wallclock_s) << '\n';
}

void EvalReport::write_plot_csv(std::ostream& out) const {
  out << "trajectory_id,method,horizon_s,track,seq,lat,lon\n";
  for (const auto& t : tracks) {
    for (int which = 0; which < 2; ++which) {
      const auto& pts = which == 0 ? t.truth : t.predicted;
      for (std::size_t k = 0; k < pts.size(); ++k)
        out << t.trajectory_id << ',' << t.method << ',' << fmt_double(t.horizon_s) << ','
            << (which == 0 ? "truth" : "predicted") << ',' << k << ',' << fmt_double(pts[k].lat)
            << ',' << fmt_double(pts[k].lon) << '\n';
    }
  }
}

bool same_results(const EvalReport& a, const EvalReport& b) {
  if (a.rows.size() != b.rows.size() || a.tracks.size() != b.tracks.size() ||
      a.skipped_samples != b.skipped_samples)
    return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& x = a.rows[i];
    const auto& y = b.rows[i];
    if (x.method != y.method || x.horizon_s != y.horizon_s || x.mean_nmi != y.mean_nmi ||
        x.std_nmi != y.std_nmi || x.n != y.n)
      return false;
  }
  for (std::size_t i = 0; i < a.tracks.size(); ++i) {
    const auto& x = a.tracks[i];
    const auto& y = b.tracks[i];
    if (x.trajectory_id != y.trajectory_id || x.method != y.method || x.horizon_s != y.horizon_s ||
        x.truth != y.truth || x.predicted != y.predicted)
      return false;
  }
  return true;
}

std::vector<std::size_t> assign_folds(std::size_t trajectories, std::size_t folds,
                                      std::uint64_t seed) {
  if (folds < 1) throw std::invalid_argument("folds must be at least 1");
  std::vector<std::size_t> order(trajectories);
  for (std::size_t i = 0; i < trajectories; ++i) order[i] = i;
  Rng rng(mix_seed(seed, 0xf01d));
  for (std::size_t i = trajectories; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
  std::vector<std::size_t> fold(trajectories);
  for (std::size_t k = 0; k < trajectories; ++k) fold[order[k]] = k % folds;
  return fold;
}

EvalReport kfold_evaluate(std::span<const Trajectory> trajectories, const EvalConfig& eval,
                          const PipelineConfig& pipeline, std::span<const CustomMethod> custom) {
  eval.validate();
  pipeline.sample.validate();
  pipeline.side_info.validate();
  pipeline.ensemble.validate();
  if (trajectories.size() < eval.folds)
    throw DataError(std::to_string(trajectories.size()) + " trajectories cannot fill " +
                    std::to_string(eval.folds) + " folds");
  {
    std::set<std::string> ids;
    for (const auto& t : trajectories)
      if (!ids.insert(t.id).second) throw DataError("duplicate trajectory id '" + t.id + "'");
  }

  std::vector<std::string> methods = eval.methods;
  for (const auto& c : custom) {
    if (std::find(methods.begin(), methods.end(), c.name) != methods.end())
      throw ConfigError("evaluation method '" + c.name + "' listed twice");
    methods.push_back(c.name);
  }
  const auto ens_it = std::find(methods.begin(), methods.end(), "ensemble");
  const bool use_ensemble = ens_it != methods.end();
  const auto ens_idx = static_cast<std::size_t>(ens_it - methods.begin());

  const auto fold_of = assign_folds(trajectories.size(), eval.folds, eval.seed);
  const std::size_t nh = eval.horizons.size();
  std::vector<FoldHorizon> results(eval.folds * nh);

  auto run = [&](std::size_t job) {
    const std::size_t f = job / nh;
    const std::size_t hi = job % nh;
    const double horizon = eval.horizons[hi];
    FoldHorizon& out = results[job];
    out.cells.resize(methods.size());

    SampleConfig sample = pipeline.sample;
    sample.tau_t = horizon;

    std::set<std::string> test_ids;
    for (std::size_t i = 0; i < trajectories.size(); ++i)
      if (fold_of[i] == f) test_ids.insert(trajectories[i].id);

    std::optional<ModelBundle> bundle;
    if (use_ensemble) {
      const auto t0 = Clock::now();
      std::vector<TrainingPair> pairs;
      for (std::size_t i = 0; i < trajectories.size(); ++i) {
        if (fold_of[i] == f) continue;
        auto p = make_training_pairs(trajectories[i], sample, pipeline.side_info);
        std::move(p.begin(), p.end(), std::back_inserter(pairs));
      }
      for (const auto& p : pairs)
        if (test_ids.count(p.trajectory_id))
          throw std::logic_error("fold leakage: trajectory " + p.trajectory_id +
                                 " appears in train and test");
      if (pairs.empty()) {
        out.warnings.push_back("fold " + std::to_string(f) + " horizon " + fmt_double(horizon) +
                               ": no training samples, skipped");
        return;
      }
      EnsembleConfig ecfg = pipeline.ensemble;
      if (eval.jobs > 1) ecfg.jobs = 1;
      bundle = train_ensemble(pairs, sample, pipeline.side_info, ecfg,
                              mix_seed(eval.seed, 1 + f * 64 + hi));
      out.cells[ens_idx].wall += seconds_since(t0);
    }

    std::vector<std::optional<GeoPoint>> preds(methods.size());
    for (std::size_t i = 0; i < trajectories.size(); ++i) {
      if (fold_of[i] != f) continue;
      const Trajectory& t = trajectories[i];
      std::vector<PlotTrack> tracks;
      if (eval.plot_data)
        for (const auto& m : methods) tracks.push_back({t.id, m, horizon, {}, {}});
      for (const WindowRef& w : window_samples(t, sample)) {
        const std::span<const AisMessage> window(t.messages.data() + w.start, sample.l);
        const AisMessage& target = t.messages[w.target];
        const EvalContext ctx{t, window, target, horizon, bundle ? &*bundle : nullptr};
        const double lead = target.tau - window.back().tau;
        bool ok = true;
        for (std::size_t m = 0; m < methods.size() && ok; ++m) {
          const auto t0 = Clock::now();
          try {
            const std::string& name = methods[m];
            if (name == "ensemble")
              preds[m] = predict_position(window, t.meta, *bundle).position;
            else if (name == "linear")
              preds[m] = linear_projection(window.last(3), lead);
            else if (name == "sogcog")
              preds[m] = sog_cog_projection(window.back(), lead);
            else
              preds[m] = custom[m - eval.methods.size()].predict(ctx);
          } catch (const DataError&) {
            preds[m].reset();
          }
          out.cells[m].wall += seconds_since(t0);
          ok = preds[m].has_value();
        }
        if (!ok) {
          ++out.skipped;
          continue;
        }
        for (std::size_t m = 0; m < methods.size(); ++m) {
          out.cells[m].errors.push_back(geo_distance(target.position(), *preds[m]));
          if (eval.plot_data) {
            tracks[m].truth.push_back(target.position());
            tracks[m].predicted.push_back(*preds[m]);
          }
        }
      }
      for (auto& tr : tracks)
        if (!tr.truth.empty()) out.tracks.push_back(std::move(tr));
    }
    if (out.cells.empty() || out.cells[0].errors.empty())
      out.warnings.push_back("fold " + std::to_string(f) + " horizon " + fmt_double(horizon) +
                             ": no valid test samples, skipped");
  };
  parallel_for(results.size(), eval.jobs, run);

  EvalReport report;
  for (std::size_t hi = 0; hi < nh; ++hi) {
    for (std::size_t m = 0; m < methods.size(); ++m) {
      EvalRow row{methods[m], eval.horizons[hi], 0.0, 0.0, 0, 0.0};
      std::size_t used = 0;
      for (std::size_t f = 0; f < eval.folds; ++f) {
        const auto& fh = results[f * nh + hi];
        if (fh.cells.empty()) continue;
        const Cell& c = fh.cells[m];
        row.wallclock_s += c.wall;
        if (c.errors.empty()) continue;
        const double n = static_cast<double>(c.errors.size());
        double mean = 0.0;
        for (double e : c.errors) mean += e;
        mean /= n;
        double var = 0.0;
        for (double e : c.errors) var += (e - mean) * (e - mean);
        row.mean_nmi += mean;
        row.std_nmi += std::sqrt(var / n);
        row.n += c.errors.size();
        ++used;
      }
      if (used > 0) {
        row.mean_nmi /= static_cast<double>(used);
        row.std_nmi /= static_cast<double>(used);
      }
      report.rows.push_back(row);
    }
  }
  for (std::size_t f = 0; f < eval.folds; ++f) {
    for (std::size_t hi = 0; hi < nh; ++hi) {
      auto& fh = results[f * nh + hi];
      report.skipped_samples += fh.skipped;
      for (auto& w : fh.warnings) report.warnings.push_back(std::move(w));
      for (auto& t : fh.tracks) report.tracks.push_back(std::move(t));
    }
  }
  return report;
}

}  // namespace aispath
