#include "aispath/featurize/frame.hpp"

#include <algorithm>
#include <cmath>

namespace aispath {

LocalFrame::LocalFrame(GeoPoint origin, double theta)
    : origin_(origin), theta_(theta), cos_(std::cos(theta)), sin_(std::sin(theta)) {
  // forward: R(-theta) (p - p0)
  gamma_ << cos_, sin_, -(cos_ * origin.lat + sin_ * origin.lon),
            -sin_, cos_, sin_ * origin.lat - cos_ * origin.lon,
            0.0, 0.0, 1.0;
  // inverse: R(theta) q + p0
  gamma_inv_ << cos_, -sin_, origin.lat,
                sin_, cos_, origin.lon,
                0.0, 0.0, 1.0;
}

Eigen::Vector2d LocalFrame::to_local(GeoPoint p) const {
  // Same map as gamma(), evaluated as rotate(p - p0) so the origin lands on
  // exactly (0, 0).
  const double dx = p.lat - origin_.lat;
  const double dy = p.lon - origin_.lon;
  return {cos_ * dx + sin_ * dy, -sin_ * dx + cos_ * dy};
}

GeoPoint LocalFrame::to_geo(const Eigen::Vector2d& q) const {
  return {origin_.lat + (cos_ * q.x() - sin_ * q.y()), origin_.lon + (sin_ * q.x() + cos_ * q.y())};
}

std::optional<double> direction_of(const Eigen::Vector2d& v) {
  const double norm = v.norm();
  if (norm == 0.0) return std::nullopt;
  const double c = std::clamp(v.x() / norm, -1.0, 1.0);
  const double sign = v.y() > 0.0 ? 1.0 : -1.0;
  return sign * std::acos(c);
}

std::optional<double> sample_direction(std::span<const AisMessage> window) {
  if (window.size() < 2) return std::nullopt;
  return direction_of({window[1].lat - window[0].lat, window[1].lon - window[0].lon});
}

std::optional<TransformedWindow> local_transform(std::span<const AisMessage> window,
                                                 const AisMessage* target) {
  const auto theta = sample_direction(window);
  if (!theta) return std::nullopt;
  TransformedWindow out;
  out.frame = LocalFrame(window.front().position(), *theta);
  out.points.reserve(window.size());
  for (const auto& m : window) out.points.push_back(out.frame.to_local(m.position()));
  if (target) out.target = out.frame.to_local(target->position());
  return out;
}

GeoPoint inverse_transform(const LocalFrame& frame, const Eigen::Vector2d& local) {
  return frame.to_geo(local);
}

}  // namespace aispath
