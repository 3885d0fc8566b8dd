#pragma once

#include <vector>

#include "scengen/safety.hpp"
#include "scengen/world.hpp"

namespace scengen {

struct ControllerParams {
    double lookahead_min{5.0};
    double lookahead_gain{0.8};     // seconds of lookahead per m/s
    double lateral_accel_max{4.0};  // m/s^2, caps speed in curves
    double crossing_gap_s{1.5};     // arrival-time gap that triggers braking
    double hazard_horizon_s{6.0};
    double throttle_gain{0.5};
    double brake_gain{0.3};
};

/// The 12 inspectable internal ADS variables.
struct InternalState {
    double speed{0.0};
    double acceleration{0.0};
    double heading_error{0.0};
    double throttle{0.0};
    double brake{0.0};
    double steer{0.0};
    double lane_offset{0.0};
    double route_progress{0.0};
    double localization_ok{1.0};
    double perception_range_frac{1.0};
    double plan_feasible{1.0};
    double control_error{0.0};
};

/// Rule-based driver: pure-pursuit steering along the route, curvature- and
/// limit-capped speed, full braking on same-lane leaders inside LoSD or on
/// crossing actors with a small arrival-time gap. Deterministic.
class EgoController {
public:
    EgoController(const RoadNetwork& road, ControllerParams params = {}, SafetyParams safety = {});

    Control plan(const std::vector<Obstacle>& perceived, const ActorState& ego, double speed_limit);

    /// Snapshot after a plan() tick. perception_range_frac and the
    /// localization noise magnitude come from the perception stage.
    InternalState internal_state(const ActorState& ego, double perception_range_frac,
                                 double localization_noise_m) const;

    double route_progress() const;  // [0,1], monotone within an episode
    bool destination_reached(const ActorState& ego) const;
    bool emergency_braking() const { return emergency_; }

private:
    const RoadNetwork& road_;
    ControllerParams params_;
    SafetyParams safety_;
    std::vector<Vec2> route_;
    std::vector<double> cumlen_;
    double progress_s_{0.0};
    double start_s_{0.0};
    double dest_s_{0.0};
    Control last_control_;
    double heading_error_{0.0};
    double cross_track_{0.0};
    bool emergency_{false};

    double project_monotone(const Vec2& p);
    Vec2 route_point(double s) const;
};

}  // namespace scengen
