#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "scengen/actor.hpp"

namespace scengen {

/// Deceleration magnitudes and minimum allowable distance for the safety
/// distance formulas. Defaults: 6 m/s^2 for every vehicle, R_min = 5 m.
struct SafetyParams {
    double alpha_f{6.0};
    double alpha_l{6.0};
    double alpha_ego{6.0};
    double r_min{5.0};
};

struct ProcBreakdown {
    double lo_proc{0.0};
    double la_proc{0.0};
    double proc{0.0};
    std::optional<int> argmax_obstacle_lo;
    std::optional<int> argmax_obstacle_la;
};

/// Longitudinal safety distance between a follower at v_f and a leader at
/// v_l. The raw value is floored at r_min. Negative speeds are rejected.
double losd(double v_f, double v_l, const SafetyParams& params = {});

/// Lateral safety distance, simplified to v^2 sin(beta) / alpha to remove
/// the removable 0/0 at sin(beta) = 0. beta in [0, pi].
double lasd(double v_ego, double beta, const SafetyParams& params = {});

/// Euclidean distance between two 3D positions (z carried for generality,
/// fixed to 0 by the 2D world).
double current_distance(double x_ego, double y_ego, double z_ego, double x_ob, double y_ob,
                        double z_ob);
inline double current_distance(const Vec2& a, const Vec2& b) {
    return current_distance(a.x, a.y, 0.0, b.x, b.y, 0.0);
}

/// Per-obstacle collision probabilities (longitudinal, lateral). Exactly one
/// of the pair can be nonzero, selected by the same-lane predicate.
/// `beta` is the unsigned angle between the ego heading and the obstacle's
/// lane tangent.
struct PerObstacleProc {
    double lo{0.0};
    double la{0.0};
};
PerObstacleProc per_obstacle_proc(const ActorState& ego, const ActorState& ob, bool same_lane,
                                  double beta, const SafetyParams& params = {});

/// Same-lane predicate plus the beta angle, resolved against the road.
struct LaneRelation {
    bool same_lane{false};
    double beta{0.0};
};
LaneRelation lane_relation(const ActorState& ego, const ActorState& ob, const RoadNetwork& road);

struct Obstacle {
    int id;
    ActorState state;
};

/// Overall collision probability over all obstacles: componentwise max, then
/// ProC = max + (1 - max) * min. A detected geometric collision forces 1.0.
ProcBreakdown collision_probability(const ActorState& ego, const std::vector<Obstacle>& obstacles,
                                    const RoadNetwork& road, const SafetyParams& params = {},
                                    bool collision_this_tick = false);

}  // namespace scengen
