#include "aispath/featurize/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aispath/domain/errors.hpp"

namespace aispath {

std::string_view to_string(SideInfoMode m) {
  switch (m) {
    case SideInfoMode::none: return "none";
    case SideInfoMode::vessel_type: return "vessel_type";
    case SideInfoMode::region: return "region";
  }
  return "none";
}

std::optional<SideInfoMode> parse_side_info_mode(std::string_view s) {
  for (auto m : {SideInfoMode::none, SideInfoMode::vessel_type, SideInfoMode::region}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

std::optional<int> SideInfoConfig::group_for(const AisMessage& first,
                                             const VesselMeta& meta) const {
  switch (mode) {
    case SideInfoMode::none: return std::nullopt;
    case SideInfoMode::vessel_type: return meta.vessel_type;
    case SideInfoMode::region: {
      const int cols = static_cast<int>(std::ceil(360.0 / region_cell_deg));
      const int row = static_cast<int>(std::floor((first.lat + 90.0) / region_cell_deg));
      const int col = static_cast<int>(std::floor((first.lon + 180.0) / region_cell_deg));
      return row * cols + col;
    }
  }
  return std::nullopt;
}

void SideInfoConfig::validate() const {
  if (!(region_cell_deg > 0.0)) throw ConfigError("side_info.region_cell_deg must be positive");
}

std::vector<TrainingPair> make_training_pairs(const Trajectory& t, const SampleConfig& cfg,
                                              const SideInfoConfig& side, FeaturizeStats* stats) {
  std::vector<TrainingPair> out;
  const auto refs = window_samples(t, cfg);
  const std::span<const AisMessage> msgs(t.messages);
  for (const auto& ref : refs) {
    const auto window = msgs.subspan(ref.start, cfg.l);
    const AisMessage& target = msgs[ref.target];
    auto local = local_transform(window, &target);
    if (stats) ++stats->windows;
    if (!local) {
      if (stats) ++stats->degenerate;
      continue;
    }
    TrainingPair pair;
    pair.features = attach_side_info(build_feature_vector(*local, window, cfg, t.meta),
                                     side.group_for(window.front(), t.meta));
    pair.target = *local->target;
    pair.frame = local->frame;
    pair.trajectory_id = t.id;
    pair.window_start = ref.start;
    pair.target_index = ref.target;
    pair.target_geo = target.position();
    pair.target_tau = target.tau;
    out.push_back(std::move(pair));
  }
  return out;
}

std::optional<std::pair<FeatureVector, LocalFrame>> featurize_window(
    std::span<const AisMessage> window, const VesselMeta& meta, const SampleConfig& cfg,
    const SideInfoConfig& side) {
  auto local = local_transform(window);
  if (!local) return std::nullopt;
  auto fv = attach_side_info(build_feature_vector(*local, window, cfg, meta),
                             side.group_for(window.front(), meta));
  return std::make_pair(std::move(fv), local->frame);
}

namespace {

double median_of(std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

constexpr std::array<std::size_t, 3> kStaticSlots{kLengthFeature, kWidthFeature, kDraftFeature};

}  // namespace

void StaticImputer::fit(std::span<const FeatureVector> rows) {
  std::map<int, std::array<std::vector<double>, 3>> by_type;
  std::array<std::vector<double>, 3> all;
  for (const auto& fv : rows) {
    const int type = static_cast<int>(fv.values.at(kVesselTypeFeature));
    auto& bucket = by_type[type];
    for (std::size_t s = 0; s < 3; ++s) {
      const double v = fv.values.at(kStaticSlots[s]);
      if (std::isnan(v)) continue;
      bucket[s].push_back(v);
      all[s].push_back(v);
    }
  }
  per_type_.clear();
  for (auto& [type, bucket] : by_type) {
    Medians m;
    for (std::size_t s = 0; s < 3; ++s) m[s] = median_of(bucket[s]);
    per_type_[type] = m;
  }
  for (std::size_t s = 0; s < 3; ++s) {
    const double g = median_of(all[s]);
    global_[s] = std::isnan(g) ? 0.0 : g;
  }
}

void StaticImputer::apply(FeatureVector& fv) const {
  const int type = static_cast<int>(fv.values.at(kVesselTypeFeature));
  const auto it = per_type_.find(type);
  for (std::size_t s = 0; s < 3; ++s) {
    double& v = fv.values.at(kStaticSlots[s]);
    if (!std::isnan(v)) continue;
    v = (it != per_type_.end() && !std::isnan(it->second[s])) ? it->second[s] : global_[s];
  }
}

void StaticImputer::set(std::map<int, Medians> per_type, Medians global) {
  per_type_ = std::move(per_type);
  global_ = global;
}

}  // namespace aispath
