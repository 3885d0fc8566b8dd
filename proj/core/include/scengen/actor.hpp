#pragma once

#include <stdexcept>

#include "scengen/geometry.hpp"
#include "scengen/road.hpp"

namespace scengen {

enum class ActorKind { Ego, NpcSmall, NpcLarge, Pedestrian };

const char* to_string(ActorKind kind);

/// Vehicle footprint defaults: 4.6 x 1.8 m small, 10.0 x 2.5 m large,
/// pedestrians as 0.3 m radius discs.
struct Footprint {
    double half_length;
    double half_width;
};
Footprint footprint_for(ActorKind kind);

constexpr int kOffLaneId = -1;  // sentinel for pedestrians mid-crossing

struct ActorState {
    Vec2 position;
    double heading{0.0};   // radians
    double speed{0.0};     // m/s, >= 0
    double acceleration{0.0};
    int lane_id{kOffLaneId};
    double half_length{2.3};
    double half_width{0.9};
    ActorKind kind{ActorKind::NpcSmall};

    bool finite() const {
        return std::isfinite(position.x) && std::isfinite(position.y) && std::isfinite(heading) &&
               std::isfinite(speed) && std::isfinite(acceleration);
    }
};

struct Control {
    double throttle{0.0};  // [0,1]
    double brake{0.0};     // [0,1]
    double steer{0.0};     // [-1,1]
};

/// Kinematic bicycle parameters shared by ego and NPC vehicles.
struct KinematicsParams {
    double a_max{3.0};       // m/s^2
    double b_max{6.0};       // m/s^2, universal deceleration
    double wheelbase{2.7};   // m
    double delta_max{0.6};   // rad
    double v_cap{30.0};      // m/s
};

class NumericDomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bicycle-model update over dt seconds. Lane id is re-resolved against
/// `road` when provided. Throws NumericDomainError on non-finite inputs.
ActorState step_actor(const ActorState& state, const Control& control, double dt,
                      const KinematicsParams& params = {}, const RoadNetwork* road = nullptr);

}  // namespace scengen
