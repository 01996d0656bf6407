#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "aispath/domain/types.hpp"
#include "aispath/featurize/features.hpp"
#include "aispath/featurize/frame.hpp"

namespace aispath {

enum class SideInfoMode { none, vessel_type, region };

std::string_view to_string(SideInfoMode m);
std::optional<SideInfoMode> parse_side_info_mode(std::string_view s);

struct SideInfoConfig {
  SideInfoMode mode = SideInfoMode::none;
  double region_cell_deg = 5.0;  // grid cell size for geographic grouping

  bool enabled() const { return mode != SideInfoMode::none; }
  /// Group id of a window, from its first message.
  std::optional<int> group_for(const AisMessage& first, const VesselMeta& meta) const;
  void validate() const;
};

/// One supervised sample: features of a window, the target position in the
/// window's frame, the frame itself and where the window came from.
struct TrainingPair {
  FeatureVector features;
  Eigen::Vector2d target = Eigen::Vector2d::Zero();
  LocalFrame frame;
  std::string trajectory_id;
  std::size_t window_start = 0;
  std::size_t target_index = 0;
  GeoPoint target_geo;
  double target_tau = 0.0;
};

struct FeaturizeStats {
  std::size_t windows = 0;
  std::size_t degenerate = 0;  // first two positions identical

  FeaturizeStats& operator+=(const FeaturizeStats& o) {
    windows += o.windows;
    degenerate += o.degenerate;
    return *this;
  }
};

/// Windowing, pairing, local transform and feature encoding for one trajectory.
std::vector<TrainingPair> make_training_pairs(const Trajectory& t, const SampleConfig& cfg,
                                              const SideInfoConfig& side,
                                              FeaturizeStats* stats = nullptr);

/// Features of an arbitrary l-message window (prediction time). Empty when
/// the window direction is undefined.
std::optional<std::pair<FeatureVector, LocalFrame>> featurize_window(
    std::span<const AisMessage> window, const VesselMeta& meta, const SampleConfig& cfg,
    const SideInfoConfig& side);

/// Median imputation of absent static features (length, width, draft), keyed
/// by vessel type with a global fallback.
class StaticImputer {
 public:
  using Medians = std::array<double, 3>;

  void fit(std::span<const FeatureVector> rows);
  void apply(FeatureVector& fv) const;

  const std::map<int, Medians>& per_type() const { return per_type_; }
  const Medians& global() const { return global_; }
  void set(std::map<int, Medians> per_type, Medians global);

 private:
  // NaN inside a per-type entry means "no observation for that type"
  std::map<int, Medians> per_type_;
  Medians global_{0.0, 0.0, 0.0};
};

}  // namespace aispath
