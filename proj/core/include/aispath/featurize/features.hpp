#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aispath/domain/types.hpp"
#include "aispath/featurize/frame.hpp"

namespace aispath {

struct SampleConfig {
  std::size_t l = 8;         // messages per window, even
  std::size_t stride = 4;
  double tau_t = 1800.0;     // prediction horizon, seconds
  std::optional<double> horizon_tol;  // seconds; default max(120, 0.1 tau_t)
  std::size_t k_tail = 4;

  double tolerance() const;
  void validate() const;
};

/// A window of `cfg.l` consecutive messages starting at `start`, paired with
/// the message at index `target`.
struct WindowRef {
  std::size_t start = 0;
  std::size_t target = 0;

  friend bool operator==(const WindowRef&, const WindowRef&) = default;
};

/// Overlapping windows at the configured stride. Each window is paired with
/// the later message closest to (last window time + tau_t); windows without a
/// message within the tolerance are dropped.
std::vector<WindowRef> window_samples(const Trajectory& t, const SampleConfig& cfg);

// Fixed layout: 8 latitude, 8 longitude, 6 velocity, 3 kinetic, 4 static.
inline constexpr std::size_t kBaseFeatureCount = 29;
inline constexpr std::size_t kVesselTypeFeature = 25;
inline constexpr std::size_t kLengthFeature = 26;
inline constexpr std::size_t kWidthFeature = 27;
inline constexpr std::size_t kDraftFeature = 28;

std::vector<std::string> feature_names(bool side_info);

/// Feature encoding of one sample. Absent static fields are NaN until the
/// imputer fills them.
struct FeatureVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Builds the fixed-length encoding from a window already mapped into its
/// local frame. Velocities are in local degrees per second.
FeatureVector build_feature_vector(const TransformedWindow& local,
                                   std::span<const AisMessage> window, const SampleConfig& cfg,
                                   const VesselMeta& meta);

/// Appends one categorical group id; identity when `group` is empty.
FeatureVector attach_side_info(FeatureVector fv, std::optional<int> group);

}  // namespace aispath
