#include "aispath/cli/stages.hpp"

#include "aispath/domain/errors.hpp"
#include "aispath/util/parallel.hpp"

namespace aispath::cli {

namespace {

void require_input(std::span<const Trajectory> in) {
  if (in.empty()) throw DataError("input store holds no trajectories");
}

}  // namespace

PreprocessOutcome run_preprocess(std::span<const Trajectory> in, const PreprocessConfig& cfg,
                                 std::size_t jobs) {
  require_input(in);
  cfg.validate();
  std::vector<FilterResult> results(in.size());
  parallel_for(in.size(), jobs, [&](std::size_t i) { results[i] = filter_trajectory(in[i], cfg); });
  PreprocessOutcome out;
  for (auto& r : results) {
    out.totals += r.report;
    if (r.report.discarded) {
      ++out.discarded;
      continue;
    }
    out.trajectories.push_back(std::move(r.trajectory));
  }
  return out;
}

OutlierOutcome run_outliers(std::span<const Trajectory> in, const OutlierConfig& cfg, std::size_t jobs) {
  require_input(in);
  cfg.validate();
  std::vector<std::vector<AnomalyMark>> marks(in.size());
  std::vector<std::vector<Trajectory>> pieces(in.size());
  parallel_for(in.size(), jobs, [&](std::size_t i) {
    marks[i] = detect_anomalies(in[i], cfg);
    pieces[i] = split_at_anomalies(in[i], marks[i], cfg);
  });
  OutlierOutcome out;
  for (std::size_t i = 0; i < in.size(); ++i) {
    for (const auto& m : marks[i]) {
      (m.kind == AnomalyKind::sharp_turn ? out.sharp_turns : out.self_crossings)++;
      out.anomalies.push_back({in[i].id, m});
    }
    for (auto& p : pieces[i]) out.trajectories.push_back(std::move(p));
  }
  return out;
}

FeaturizeOutcome run_featurize(std::span<const Trajectory> in, const SampleConfig& sample,
                               const SideInfoConfig& side, std::size_t jobs) {
  require_input(in);
  sample.validate();
  side.validate();
  std::vector<std::vector<TrainingPair>> pairs(in.size());
  std::vector<FeaturizeStats> stats(in.size());
  parallel_for(in.size(), jobs,
               [&](std::size_t i) { pairs[i] = make_training_pairs(in[i], sample, side, &stats[i]); });
  FeaturizeOutcome out;
  out.samples.sample = sample;
  out.samples.side_info = side;
  out.samples.names = feature_names(side.enabled());
  for (std::size_t i = 0; i < in.size(); ++i) {
    out.stats += stats[i];
    for (auto& p : pairs[i]) out.samples.pairs.push_back(std::move(p));
  }
  return out;
}

}  // namespace aispath::cli
