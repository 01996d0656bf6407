#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "aispath/cli/store.hpp"
#include "aispath/domain/types.hpp"
#include "aispath/featurize/dataset.hpp"
#include "aispath/outlier/anomaly.hpp"
#include "aispath/preprocess/filter.hpp"

namespace aispath::cli {

// Per-trajectory stage drivers. Work is spread over `jobs` threads; output
// order always follows input order.

struct PreprocessOutcome {
  std::vector<Trajectory> trajectories;
  FilterReport totals;
  std::size_t discarded = 0;
};

PreprocessOutcome run_preprocess(std::span<const Trajectory> in, const PreprocessConfig& cfg,
                                 std::size_t jobs);

struct OutlierOutcome {
  std::vector<Trajectory> trajectories;
  std::vector<AnomalyRecord> anomalies;
  std::size_t sharp_turns = 0;
  std::size_t self_crossings = 0;
};

OutlierOutcome run_outliers(std::span<const Trajectory> in, const OutlierConfig& cfg, std::size_t jobs);

struct FeaturizeOutcome {
  SampleSet samples;
  FeaturizeStats stats;
};

FeaturizeOutcome run_featurize(std::span<const Trajectory> in, const SampleConfig& sample,
                               const SideInfoConfig& side, std::size_t jobs);

}  // namespace aispath::cli
