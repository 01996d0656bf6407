#pragma once

#include <span>

#include "aispath/domain/types.hpp"

namespace aispath {

/// Least-squares straight line of position against time through the last
/// three messages, evaluated `horizon` seconds after the last one.
GeoPoint linear_projection(std::span<const AisMessage> last3, double horizon);

/// Dead reckoning: sog * horizon along cog on the sphere.
GeoPoint sog_cog_projection(const AisMessage& last, double horizon);

}  // namespace aispath
