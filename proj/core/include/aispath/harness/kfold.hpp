#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aispath/domain/types.hpp"
#include "aispath/ensemble/ensemble.hpp"
#include "aispath/featurize/dataset.hpp"
#include "aispath/featurize/features.hpp"

namespace aispath {

struct EvalConfig {
  std::vector<double> horizons{900.0, 1800.0, 2700.0, 3600.0};  // seconds
  std::size_t folds = 10;
  std::vector<std::string> methods{"ensemble", "linear", "sogcog"};
  std::uint64_t seed = 0;
  std::size_t jobs = 1;      // folds evaluated concurrently
  bool plot_data = false;    // keep truth/prediction tracks per test trajectory

  void validate() const;
};

/// Everything the ensemble needs besides the data. sample.tau_t is replaced
/// by each evaluation horizon.
struct PipelineConfig {
  SampleConfig sample;
  SideInfoConfig side_info;
  EnsembleConfig ensemble;
};

/// What a prediction method sees for one test window.
struct EvalContext {
  const Trajectory& trajectory;
  std::span<const AisMessage> window;
  const AisMessage& target;
  double horizon;               // nominal, seconds
  const ModelBundle* bundle;    // null unless "ensemble" is evaluated
};

/// Extra method, e.g. an oracle in tests. Returning nullopt drops the sample
/// for every method.
struct CustomMethod {
  std::string name;
  std::function<std::optional<GeoPoint>(const EvalContext&)> predict;
};

struct EvalRow {
  std::string method;
  double horizon_s = 0.0;
  double mean_nmi = 0.0;
  double std_nmi = 0.0;
  std::size_t n = 0;
  double wallclock_s = 0.0;
};

struct PlotTrack {
  std::string trajectory_id;
  std::string method;
  double horizon_s = 0.0;
  std::vector<GeoPoint> truth;
  std::vector<GeoPoint> predicted;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  std::vector<PlotTrack> tracks;
  std::vector<std::string> warnings;
  std::size_t skipped_samples = 0;  // at least one method could not predict

  const EvalRow* find(std::string_view method, double horizon_s) const;
  void write_csv(std::ostream& out) const;
  void write_plot_csv(std::ostream& out) const;
};

/// Same rows and tracks, ignoring wall-clock timings.
bool same_results(const EvalReport& a, const EvalReport& b);

/// Seeded trajectory-to-fold assignment with fold sizes differing by at most one.
std::vector<std::size_t> assign_folds(std::size_t trajectories, std::size_t folds,
                                      std::uint64_t seed);

/// Trajectory-level k-fold evaluation. For every fold and horizon an ensemble
/// is trained on the other folds; every method is scored on the held-out
/// fold's windows by great-circle error. Per-fold mean and std are averaged
/// over the folds that produced samples; n is the total sample count.
EvalReport kfold_evaluate(std::span<const Trajectory> trajectories, const EvalConfig& eval,
                          const PipelineConfig& pipeline,
                          std::span<const CustomMethod> custom = {});

}  // namespace aispath
