#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "aispath/domain/types.hpp"

namespace aispath {

/// Rigid local coordinate system of one sample: the first message sits at
/// the origin and the initial direction of travel along the positive first
/// axis. Coordinates are planar (lat, lon) degrees.
class LocalFrame {
 public:
  LocalFrame() = default;
  LocalFrame(GeoPoint origin, double theta);

  double theta() const { return theta_; }
  GeoPoint origin() const { return origin_; }

  /// Homogeneous 3x3 forward map and its inverse.
  const Eigen::Matrix3d& gamma() const { return gamma_; }
  const Eigen::Matrix3d& gamma_inverse() const { return gamma_inv_; }

  Eigen::Vector2d to_local(GeoPoint p) const;
  GeoPoint to_geo(const Eigen::Vector2d& local) const;

 private:
  GeoPoint origin_;
  double theta_ = 0.0;
  double cos_ = 1.0;
  double sin_ = 0.0;
  Eigen::Matrix3d gamma_ = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d gamma_inv_ = Eigen::Matrix3d::Identity();
};

/// Signed angle of the first displacement of the window against the first
/// axis: positive iff its second (longitude) component is positive. Empty when
/// the first two positions coincide.
std::optional<double> sample_direction(std::span<const AisMessage> window);

/// Signed direction for a raw displacement vector; see sample_direction.
std::optional<double> direction_of(const Eigen::Vector2d& v);

struct TransformedWindow {
  LocalFrame frame;
  std::vector<Eigen::Vector2d> points;
  std::optional<Eigen::Vector2d> target;
};

/// Maps every window position (and the target, when given) into the window's
/// own frame. Empty when the direction is undefined.
std::optional<TransformedWindow> local_transform(std::span<const AisMessage> window,
                                                 const AisMessage* target = nullptr);

GeoPoint inverse_transform(const LocalFrame& frame, const Eigen::Vector2d& local);

}  // namespace aispath
