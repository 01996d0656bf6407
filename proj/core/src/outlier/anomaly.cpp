#include "aispath/outlier/anomaly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "aispath/domain/errors.hpp"
#include "aispath/domain/geo.hpp"
#include "aispath/outlier/rdp.hpp"

namespace aispath {

void OutlierConfig::validate() const {
  if (!(d0_rdp > 0.0)) throw ConfigError("outlier.d0_rdp must be positive");
  if (!(delta_a > 0.0)) throw ConfigError("outlier.delta_a must be positive");
  if (!(delta_theta > 0.0 && delta_theta < 180.0)) {
    throw ConfigError("outlier.delta_theta must lie in (0, 180)");
  }
  if (!(loop_len_max > 0.0)) throw ConfigError("outlier.loop_len_max must be positive");
  if (min_fragment < 1) throw ConfigError("outlier.min_fragment must be at least 1");
}

std::string_view to_string(AnomalyKind k) {
  return k == AnomalyKind::sharp_turn ? "sharp_turn" : "self_crossing";
}

namespace {

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

}  // namespace

std::optional<SegmentCrossing> segment_intersection(GeoPoint p1, GeoPoint p2, GeoPoint p3,
                                                    GeoPoint p4) {
  const Eigen::Vector2d d1 = planar_delta(p1, p2);
  const Eigen::Vector2d d2 = planar_delta(p3, p4);
  if (d1.isZero(0.0) || d2.isZero(0.0)) {
    throw std::domain_error("segment_intersection: degenerate segment");
  }
  const double det = cross(d1, d2);
  if (det == 0.0) return std::nullopt;
  const Eigen::Vector2d r = planar_delta(p1, p3);
  const double alpha = cross(r, d2) / det;
  const double beta = cross(r, d1) / det;
  if (alpha < 0.0 || alpha > 1.0 || beta < 0.0 || beta > 1.0) return std::nullopt;
  return SegmentCrossing{alpha, beta, {p1.lat + alpha * d1.x(), p1.lon + alpha * d1.y()}};
}

std::vector<AnomalyMark> detect_sharp_turns(const Trajectory& t, const OutlierConfig& cfg) {
  std::vector<AnomalyMark> marks;
  const std::size_t n = t.size();
  if (n < 3) return marks;
  const auto control = rdp2_control_points(t, cfg.d0_rdp, cfg.delta_a);
  for (std::size_t idx : control) {
    if (idx == 0 || idx + 1 >= n) continue;
    const GeoPoint p = t.messages[idx].position();
    const Eigen::Vector2d v1 = planar_delta(t.messages[idx - 1].position(), p);
    const Eigen::Vector2d v2 = planar_delta(t.messages[idx + 1].position(), p);
    if (v1.isZero(0.0) || v2.isZero(0.0)) continue;
    const double angle = angle_between(v1, v2);
    if (angle < cfg.delta_theta) {
      marks.push_back({AnomalyKind::sharp_turn, idx, idx, angle});
    }
  }
  return marks;
}

std::vector<AnomalyMark> detect_self_crossings(const Trajectory& t, const OutlierConfig& cfg) {
  std::vector<AnomalyMark> raw;
  const std::size_t n = t.size();
  if (n < 4) return raw;
  const auto pts = positions_of(t);

  // cumulative along-path distance
  std::vector<double> s(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) s[k] = s[k - 1] + geo_distance(pts[k - 1], pts[k]);

  for (std::size_t i = 0; i + 3 < n; ++i) {
    if (pts[i] == pts[i + 1]) continue;
    const double lat_lo1 = std::min(pts[i].lat, pts[i + 1].lat);
    const double lat_hi1 = std::max(pts[i].lat, pts[i + 1].lat);
    const double lon_lo1 = std::min(pts[i].lon, pts[i + 1].lon);
    const double lon_hi1 = std::max(pts[i].lon, pts[i + 1].lon);
    for (std::size_t j = i + 2; j + 1 < n; ++j) {
      // The loop contains the whole path f_{i+1}..f_j, so once that alone is
      // too long no later j can close a short loop.
      const double inner = s[j] - s[i + 1];
      if (inner >= cfg.loop_len_max) break;
      if (pts[j] == pts[j + 1]) continue;
      if (std::max(pts[j].lat, pts[j + 1].lat) < lat_lo1 ||
          std::min(pts[j].lat, pts[j + 1].lat) > lat_hi1 ||
          std::max(pts[j].lon, pts[j + 1].lon) < lon_lo1 ||
          std::min(pts[j].lon, pts[j + 1].lon) > lon_hi1) {
        continue;
      }
      const auto hit = segment_intersection(pts[i], pts[i + 1], pts[j], pts[j + 1]);
      if (!hit) continue;
      const double loop = geo_distance(hit->point, pts[i + 1]) + inner +
                          geo_distance(pts[j], hit->point);
      if (loop < cfg.loop_len_max) {
        raw.push_back({AnomalyKind::self_crossing, i + 1, j, loop});
      }
    }
  }

  std::sort(raw.begin(), raw.end(), [](const AnomalyMark& a, const AnomalyMark& b) {
    return a.first != b.first ? a.first < b.first : a.last < b.last;
  });
  std::vector<AnomalyMark> merged;
  for (const auto& m : raw) {
    if (!merged.empty() && m.first <= merged.back().last) {
      merged.back().last = std::max(merged.back().last, m.last);
      merged.back().measure = std::max(merged.back().measure, m.measure);
    } else {
      merged.push_back(m);
    }
  }
  return merged;
}

std::vector<AnomalyMark> detect_anomalies(const Trajectory& t, const OutlierConfig& cfg) {
  auto marks = detect_sharp_turns(t, cfg);
  auto loops = detect_self_crossings(t, cfg);
  marks.insert(marks.end(), loops.begin(), loops.end());
  std::stable_sort(marks.begin(), marks.end(),
                   [](const AnomalyMark& a, const AnomalyMark& b) { return a.first < b.first; });
  return marks;
}

std::vector<Trajectory> split_at_anomalies(const Trajectory& t, std::vector<AnomalyMark> marks,
                                           const OutlierConfig& cfg) {
  const std::size_t n = t.size();
  if (marks.empty()) {
    if (n >= cfg.min_fragment) return {t};
    return {};
  }
  std::vector<bool> cut(n, false);
  for (const auto& m : marks) {
    if (m.first >= n || m.last >= n || m.first > m.last) {
      throw std::out_of_range("split_at_anomalies: mark outside trajectory");
    }
    std::size_t lo = m.first;
    std::size_t hi = m.last;
    if (m.kind == AnomalyKind::sharp_turn) {
      lo = m.first >= cfg.removal_window ? m.first - cfg.removal_window : 0;
      hi = std::min(n - 1, m.last + cfg.removal_window);
    }
    std::fill(cut.begin() + static_cast<std::ptrdiff_t>(lo),
              cut.begin() + static_cast<std::ptrdiff_t>(hi) + 1, true);
  }

  std::vector<Trajectory> out;
  std::size_t piece = 0;
  std::size_t k = 0;
  while (k < n) {
    if (cut[k]) {
      ++k;
      continue;
    }
    std::size_t end = k;
    while (end < n && !cut[end]) ++end;
    if (end - k >= cfg.min_fragment) {
      Trajectory frag;
      frag.id = t.id + "#" + std::to_string(piece);
      frag.meta = t.meta;
      frag.messages.assign(t.messages.begin() + static_cast<std::ptrdiff_t>(k),
                           t.messages.begin() + static_cast<std::ptrdiff_t>(end));
      out.push_back(std::move(frag));
    }
    ++piece;
    k = end;
  }
  return out;
}

}  // namespace aispath
