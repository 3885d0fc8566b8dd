#include "scengen/safety.hpp"

#include <algorithm>
#include <cmath>

namespace scengen {

double losd(double v_f, double v_l, const SafetyParams& params) {
    if (v_f < 0.0 || v_l < 0.0 || !std::isfinite(v_f) || !std::isfinite(v_l))
        throw NumericDomainError("losd: speeds must be finite and non-negative");
    double raw = 0.5 * (v_f * v_f / params.alpha_f - v_l * v_l / params.alpha_l) + params.r_min;
    return std::max(raw, params.r_min);
}

double lasd(double v_ego, double beta, const SafetyParams& params) {
    if (v_ego < 0.0 || !std::isfinite(v_ego) || !std::isfinite(beta))
        throw NumericDomainError("lasd: invalid inputs");
    return v_ego * v_ego * std::sin(beta) / params.alpha_ego;
}

double current_distance(double x_ego, double y_ego, double z_ego, double x_ob, double y_ob,
                        double z_ob) {
    double dx = x_ego - x_ob, dy = y_ego - y_ob, dz = z_ego - z_ob;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

PerObstacleProc per_obstacle_proc(const ActorState& ego, const ActorState& ob, bool same_lane,
                                  double beta, const SafetyParams& params) {
    if (!ego.finite() || !ob.finite()) throw NumericDomainError("per_obstacle_proc: non-finite actor");
    double cd = current_distance(ego.position, ob.position);
    PerObstacleProc out;
    if (same_lane) {
        double sd = losd(ego.speed, ob.speed, params);
        out.lo = std::clamp((sd - cd) / sd, 0.0, 1.0);
    } else {
        double sd = lasd(ego.speed, beta, params);
        if (sd > 0.0) out.la = std::clamp((sd - cd) / sd, 0.0, 1.0);
    }
    return out;
}

LaneRelation lane_relation(const ActorState& ego, const ActorState& ob, const RoadNetwork& road) {
    LaneRelation rel;
    int ego_lane = road.member_lane(ego.position, ego.half_width);
    int ob_lane = road.member_lane(ob.position, ob.half_width);
    if (ob_lane == kOffLaneId) {
        // Off-lane obstacles (pedestrians mid-crossing) count as same-lane
        // when inside the ego lane's ribbon.
        const Lane* el = road.lane(ego_lane);
        if (el) {
            double d = 0.0;
            el->project(ob.position, &d);
            rel.same_lane = d <= el->width * 0.5;
        }
    } else {
        rel.same_lane = ego_lane == ob_lane;
    }
    // beta: unsigned angle between ego heading and the obstacle lane tangent.
    const Lane* ol = road.lane(ob_lane != kOffLaneId ? ob_lane : road.nearest_lane(ob.position));
    if (ol) {
        Vec2 tangent = ol->tangent_at(ol->project(ob.position));
        double cosb = std::clamp(from_heading(ego.heading).dot(tangent), -1.0, 1.0);
        rel.beta = std::acos(cosb);
    }
    return rel;
}

ProcBreakdown collision_probability(const ActorState& ego, const std::vector<Obstacle>& obstacles,
                                    const RoadNetwork& road, const SafetyParams& params,
                                    bool collision_this_tick) {
    ProcBreakdown out;
    for (const auto& ob : obstacles) {
        LaneRelation rel = lane_relation(ego, ob.state, road);
        PerObstacleProc p = per_obstacle_proc(ego, ob.state, rel.same_lane, rel.beta, params);
        if (p.lo > out.lo_proc) {
            out.lo_proc = p.lo;
            out.argmax_obstacle_lo = ob.id;
        }
        if (p.la > out.la_proc) {
            out.la_proc = p.la;
            out.argmax_obstacle_la = ob.id;
        }
    }
    double hi = std::max(out.lo_proc, out.la_proc);
    double lo = std::min(out.lo_proc, out.la_proc);
    out.proc = hi + (1.0 - hi) * lo;
    if (collision_this_tick) out.proc = 1.0;
    return out;
}

}  // namespace scengen
