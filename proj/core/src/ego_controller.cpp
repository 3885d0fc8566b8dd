#include "scengen/ego_controller.hpp"

#include <algorithm>
#include <cmath>

#include "scengen/collision.hpp"

namespace scengen {

EgoController::EgoController(const RoadNetwork& road, ControllerParams params, SafetyParams safety)
    : road_(road), params_(params), safety_(safety), route_(road.route_polyline()) {
    cumlen_.resize(route_.size());
    double s = 0.0;
    for (std::size_t i = 0; i < route_.size(); ++i) {
        if (i > 0) s += (route_[i] - route_[i - 1]).norm();
        cumlen_[i] = s;
    }
    // episodes start at the origin, not at the lane's very first point
    auto project_all = [&](const Vec2& p) {
        double best = 1e300, s_best = 0.0;
        for (std::size_t i = 0; i + 1 < route_.size(); ++i) {
            double t = 0.0;
            double d = point_segment_distance(p, route_[i], route_[i + 1], &t);
            if (d < best) {
                best = d;
                s_best = cumlen_[i] + t * (cumlen_[i + 1] - cumlen_[i]);
            }
        }
        return s_best;
    };
    start_s_ = project_all(road.origin);
    dest_s_ = project_all(road.destination);
    progress_s_ = start_s_;
}

double EgoController::project_monotone(const Vec2& p) {
    // Search only a window ahead of the current progress so that loops in
    // the road cannot pull progress backwards.
    double best_d = 1e300;
    double best_s = progress_s_;
    for (std::size_t i = 0; i + 1 < route_.size(); ++i) {
        if (cumlen_[i + 1] < progress_s_ - 5.0) continue;
        if (cumlen_[i] > progress_s_ + 40.0) break;
        double t = 0.0;
        double d = point_segment_distance(p, route_[i], route_[i + 1], &t);
        if (d < best_d) {
            best_d = d;
            best_s = cumlen_[i] + t * (cumlen_[i + 1] - cumlen_[i]);
        }
    }
    cross_track_ = best_d;
    progress_s_ = std::max(progress_s_, best_s);
    return progress_s_;
}

Vec2 EgoController::route_point(double s) const {
    s = std::clamp(s, 0.0, cumlen_.back());
    auto it = std::lower_bound(cumlen_.begin(), cumlen_.end(), s);
    std::size_t i = std::min<std::size_t>(std::distance(cumlen_.begin(), it), route_.size() - 1);
    if (i == 0) return route_.front();
    double seg = cumlen_[i] - cumlen_[i - 1];
    double t = seg < 1e-12 ? 0.0 : (s - cumlen_[i - 1]) / seg;
    return route_[i - 1] + (route_[i] - route_[i - 1]) * t;
}

Control EgoController::plan(const std::vector<Obstacle>& perceived, const ActorState& ego,
                            double speed_limit) {
    project_monotone(ego.position);

    // Pure-pursuit steering toward a lookahead point on the route.
    double ld = std::max(params_.lookahead_min, params_.lookahead_gain * ego.speed);
    Vec2 target = route_point(progress_s_ + ld);
    Vec2 to_target = target - ego.position;
    double alpha = wrap_angle(std::atan2(to_target.y, to_target.x) - ego.heading);
    heading_error_ = alpha;
    KinematicsParams kin;  // wheelbase/delta_max defaults shared with the world
    double dist = std::max(to_target.norm(), 1e-6);
    double delta = std::atan2(2.0 * kin.wheelbase * std::sin(alpha), dist);
    double steer = std::clamp(delta / kin.delta_max, -1.0, 1.0);

    // Curvature-limited target speed over the next stretch of route.
    double target_speed = speed_limit;
    for (double s = 10.0; s <= 30.0; s += 10.0) {
        Vec2 a = route_point(progress_s_);
        Vec2 b = route_point(progress_s_ + s * 0.5);
        Vec2 c = route_point(progress_s_ + s);
        Vec2 t1 = (b - a).normalized();
        Vec2 t2 = (c - b).normalized();
        double dang = std::abs(wrap_angle(std::atan2(t2.y, t2.x) - std::atan2(t1.y, t1.x)));
        double kappa = dang / std::max(s * 0.5, 1e-6);
        if (kappa > 1e-4) target_speed = std::min(target_speed, std::sqrt(params_.lateral_accel_max / kappa));
    }

    // Hazard check over perceived actors.
    emergency_ = false;
    Vec2 fwd = from_heading(ego.heading);
    int ego_lane = road_.member_lane(ego.position, ego.half_width);
    const Lane* el = road_.lane(ego_lane);
    for (const auto& ob : perceived) {
        Vec2 rel = ob.state.position - ego.position;
        bool ahead = rel.dot(fwd) > 0.0;
        double cd = rel.norm();
        if (ahead && el) {
            double d_lane = 0.0;
            el->project(ob.state.position, &d_lane);
            bool in_ego_lane = d_lane <= el->width * 0.5 + ob.state.half_width;
            // bumper-to-bumper gap, not center distance
            double gap = cd - ego.half_length - ob.state.half_length;
            if (in_ego_lane && gap < losd(ego.speed, ob.state.speed, safety_)) {
                emergency_ = true;
                break;
            }
        }
        auto hit = trajectory_intersection(ego, ob.state, params_.hazard_horizon_s);
        if (hit && std::abs(hit->t_a - hit->t_b) < params_.crossing_gap_s) {
            emergency_ = true;
            break;
        }
    }

    Control c;
    c.steer = steer;
    if (emergency_) {
        c.brake = 1.0;
    } else if (ego.speed < target_speed - 1e-9) {
        c.throttle = std::clamp((target_speed - ego.speed) * params_.throttle_gain, 0.0, 1.0);
    } else if (ego.speed > target_speed + 0.2) {
        c.brake = std::clamp((ego.speed - target_speed) * params_.brake_gain, 0.0, 1.0);
    }
    last_control_ = c;
    return c;
}

InternalState EgoController::internal_state(const ActorState& ego, double perception_range_frac,
                                            double localization_noise_m) const {
    InternalState st;
    st.speed = ego.speed;
    st.acceleration = ego.acceleration;
    st.heading_error = heading_error_;
    st.throttle = last_control_.throttle;
    st.brake = last_control_.brake;
    st.steer = last_control_.steer;
    int lane_id = road_.member_lane(ego.position, ego.half_width);
    const Lane* lane = road_.lane(lane_id);
    if (lane) {
        double d = 0.0;
        lane->project(ego.position, &d);
        st.lane_offset = d;
    }
    st.route_progress = route_progress();
    st.localization_ok = localization_noise_m > 0.5 ? 0.0 : 1.0;
    st.perception_range_frac = perception_range_frac;
    st.plan_feasible = emergency_ ? 0.0 : 1.0;
    st.control_error = cross_track_;
    return st;
}

double EgoController::route_progress() const {
    double span = dest_s_ - start_s_;
    return span < 1e-9 ? 0.0 : std::clamp((progress_s_ - start_s_) / span, 0.0, 1.0);
}

bool EgoController::destination_reached(const ActorState& ego) const {
    return (ego.position - road_.destination).norm() < 2.0 || progress_s_ >= dest_s_ - 0.5;
}

}  // namespace scengen
