#include "aispath/featurize/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "aispath/domain/errors.hpp"
#include "aispath/domain/geo.hpp"

namespace aispath {

double SampleConfig::tolerance() const {
  return horizon_tol ? *horizon_tol : std::max(120.0, 0.1 * tau_t);
}

void SampleConfig::validate() const {
  if (l < 4 || l % 2 != 0) throw ConfigError("sample.l must be an even integer >= 4");
  if (stride < 1 || stride > l) throw ConfigError("sample.stride must lie in [1, l]");
  if (!(tau_t > 0.0)) throw ConfigError("sample.tau_t must be positive");
  if (horizon_tol && !(*horizon_tol > 0.0)) throw ConfigError("sample.horizon_tol must be positive");
  if (k_tail < 1 || k_tail > l) throw ConfigError("sample.k_tail must lie in [1, l]");
}

std::vector<WindowRef> window_samples(const Trajectory& t, const SampleConfig& cfg) {
  std::vector<WindowRef> out;
  const auto& msgs = t.messages;
  const std::size_t n = msgs.size();
  if (n < cfg.l) return out;
  const double tol = cfg.tolerance();
  for (std::size_t start = 0; start + cfg.l <= n; start += cfg.stride) {
    const std::size_t last = start + cfg.l - 1;
    const double want = msgs[last].tau + cfg.tau_t;
    auto it = std::lower_bound(msgs.begin() + static_cast<std::ptrdiff_t>(last) + 1, msgs.end(),
                               want, [](const AisMessage& m, double v) { return m.tau < v; });
    std::optional<std::size_t> best;
    double best_gap = std::numeric_limits<double>::infinity();
    auto consider = [&](std::size_t idx) {
      const double gap = std::abs(msgs[idx].tau - want);
      if (gap < best_gap) {
        best_gap = gap;
        best = idx;
      }
    };
    const auto idx = static_cast<std::size_t>(it - msgs.begin());
    // earlier candidate first so ties go to the earlier message
    if (idx > last + 1) consider(idx - 1);
    if (idx < n) consider(idx);
    if (best && best_gap <= tol) out.push_back({start, *best});
  }
  return out;
}

std::vector<std::string> feature_names(bool side_info) {
  std::vector<std::string> names;
  for (const char* axis : {"lat", "lon"}) {
    const std::string a = axis;
    for (const char* what : {"first", "second", "mid_lo", "mid_hi", "penult", "last",
                             "mean_first_half", "mean_second_half"}) {
      names.push_back(a + "_" + what);
    }
  }
  for (const char* axis : {"lat", "lon"}) {
    const std::string a = axis;
    names.push_back("v" + a + "_penult");
    names.push_back("v" + a + "_last");
    names.push_back("v" + a + "_mean");
  }
  names.insert(names.end(), {"sog_tail_mean", "sog_rate_tail_mean", "cog_sine_tail_mean",
                             "vessel_type", "length", "width", "draft"});
  if (side_info) names.push_back("side_group");
  return names;
}

FeatureVector build_feature_vector(const TransformedWindow& local,
                                   std::span<const AisMessage> window, const SampleConfig& cfg,
                                   const VesselMeta& meta) {
  const std::size_t l = cfg.l;
  if (window.size() != l || local.points.size() != l) {
    throw std::invalid_argument("build_feature_vector: window length differs from sample.l");
  }
  for (std::size_t k = 1; k < l; ++k) {
    if (!(window[k].tau > window[k - 1].tau)) {
      throw std::invalid_argument("build_feature_vector: timestamps must strictly increase");
    }
  }
  const auto& p = local.points;
  FeatureVector fv;
  fv.values.reserve(kBaseFeatureCount + 1);
  const std::size_t half = l / 2;

  for (int axis = 0; axis < 2; ++axis) {
    auto c = [&](std::size_t i) { return p[i][axis]; };
    fv.values.insert(fv.values.end(), {c(0), c(1), c(half - 1), c(half), c(l - 2), c(l - 1)});
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t i = 0; i < half; ++i) lo += c(i);
    for (std::size_t i = half; i < l; ++i) hi += c(i);
    fv.values.push_back(lo / static_cast<double>(half));
    fv.values.push_back(hi / static_cast<double>(l - half));
  }

  for (int axis = 0; axis < 2; ++axis) {
    auto rate = [&](std::size_t i) {
      return (p[i][axis] - p[i - 1][axis]) / (window[i].tau - window[i - 1].tau);
    };
    double mean = 0.0;
    for (std::size_t i = 1; i < l; ++i) mean += rate(i);
    mean /= static_cast<double>(l - 1);
    fv.values.insert(fv.values.end(), {rate(l - 2), rate(l - 1), mean});
  }

  const std::size_t tail_begin = l - cfg.k_tail;
  double sog = 0.0;
  double cog = 0.0;
  double accel = 0.0;
  std::size_t accel_terms = 0;
  for (std::size_t i = tail_begin; i < l; ++i) {
    sog += window[i].sog;
    cog += window[i].cog_sine ? *window[i].cog_sine : std::sin(deg2rad(window[i].cog));
    if (i >= 1) {
      accel += (window[i].sog - window[i - 1].sog) / (window[i].tau - window[i - 1].tau);
      ++accel_terms;
    }
  }
  const auto k = static_cast<double>(cfg.k_tail);
  fv.values.push_back(sog / k);
  fv.values.push_back(accel_terms ? accel / static_cast<double>(accel_terms) : 0.0);
  fv.values.push_back(cog / k);

  constexpr double absent = std::numeric_limits<double>::quiet_NaN();
  fv.values.push_back(static_cast<double>(meta.vessel_type));
  fv.values.push_back(meta.length.value_or(absent));
  fv.values.push_back(meta.width.value_or(absent));
  fv.values.push_back(meta.draft.value_or(absent));
  return fv;
}

FeatureVector attach_side_info(FeatureVector fv, std::optional<int> group) {
  if (group) fv.values.push_back(static_cast<double>(*group));
  return fv;
}

}  // namespace aispath
