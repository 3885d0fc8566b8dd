#pragma once

#include <optional>

#include "scengen/actor.hpp"

namespace scengen {

/// Oriented-rectangle overlap (separating axis); pedestrians are discs.
bool detect_collision(const ActorState& a, const ActorState& b);

struct RayIntersection {
    Vec2 point;
    double t_a;  // arrival time of a, seconds
    double t_b;  // arrival time of b, seconds
};

/// Intersection of the two constant-velocity rays, if both arrival times
/// fall inside [0, horizon]. Parallel non-collinear rays yield nullopt.
std::optional<RayIntersection> trajectory_intersection(const ActorState& a, const ActorState& b,
                                                       double horizon);

}  // namespace scengen
