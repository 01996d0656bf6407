#pragma once

#include <map>
#include <optional>
#include <string_view>

#include "aispath/domain/types.hpp"

namespace aispath {

enum class VesselCategory { cargo, tanker, tug, towing, other };

/// Maps an AIS ship-and-cargo type code onto the coarse category used for
/// speed caps.
VesselCategory category_of(int vessel_type);
std::string_view to_string(VesselCategory c);
std::optional<VesselCategory> parse_vessel_category(std::string_view s);

/// Per-category speed caps in knots.
struct SpeedLimits {
  std::map<VesselCategory, double> caps{
      {VesselCategory::cargo, 30.0},
      {VesselCategory::tanker, 30.0},
      {VesselCategory::tug, 20.0},
      {VesselCategory::towing, 20.0},
      {VesselCategory::other, 50.0},
  };

  double limit_for(int vessel_type) const;
  void validate() const;
};

enum class RejectReason { none, latitude, longitude, speed };

std::string_view to_string(RejectReason r);

struct ValidationResult {
  std::optional<AisMessage> message;
  RejectReason reason = RejectReason::none;

  bool accepted() const { return message.has_value(); }
};

/// Range checks on a raw report. Accepted messages have cog/heading
/// normalized into [0, 360).
ValidationResult validate_message(const AisMessage& raw, const SpeedLimits& limits);

}  // namespace aispath
