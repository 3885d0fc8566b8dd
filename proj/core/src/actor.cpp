#include "scengen/actor.hpp"

#include <algorithm>
#include <cmath>

namespace scengen {

const char* to_string(ActorKind kind) {
    switch (kind) {
        case ActorKind::Ego: return "ego";
        case ActorKind::NpcSmall: return "npc_small";
        case ActorKind::NpcLarge: return "npc_large";
        case ActorKind::Pedestrian: return "pedestrian";
    }
    return "unknown";
}

Footprint footprint_for(ActorKind kind) {
    switch (kind) {
        case ActorKind::Ego:
        case ActorKind::NpcSmall: return {2.3, 0.9};
        case ActorKind::NpcLarge: return {5.0, 1.25};
        case ActorKind::Pedestrian: return {0.3, 0.3};
    }
    return {2.3, 0.9};
}

ActorState step_actor(const ActorState& state, const Control& control, double dt,
                      const KinematicsParams& params, const RoadNetwork* road) {
    if (!state.finite() || !std::isfinite(control.throttle) || !std::isfinite(control.brake) ||
        !std::isfinite(control.steer) || !std::isfinite(dt)) {
        throw NumericDomainError("step_actor: non-finite input");
    }
    if (dt <= 0.0) throw NumericDomainError("step_actor: dt must be positive");

    double throttle = std::clamp(control.throttle, 0.0, 1.0);
    double brake = std::clamp(control.brake, 0.0, 1.0);
    double steer = std::clamp(control.steer, -1.0, 1.0);

    ActorState next = state;
    double accel = throttle * params.a_max - brake * params.b_max;
    next.speed = std::clamp(state.speed + accel * dt, 0.0, params.v_cap);
    next.acceleration = (next.speed - state.speed) / dt;

    double yaw_rate = (state.speed / params.wheelbase) * std::tan(steer * params.delta_max);
    next.heading = state.heading + yaw_rate * dt;

    double avg_speed = 0.5 * (state.speed + next.speed);
    next.position = state.position + from_heading(state.heading) * (avg_speed * dt);

    if (road) {
        int member = road->member_lane(next.position, next.half_width);
        next.lane_id = member >= 0 ? member : road->nearest_lane(next.position);
    }
    return next;
}

}  // namespace scengen
