#include "scengen/actions.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "scengen/collision.hpp"

namespace scengen {

const char* to_string(WeatherLevel v) {
    switch (v) {
        case WeatherLevel::None: return "none";
        case WeatherLevel::Light: return "light";
        case WeatherLevel::Moderate: return "moderate";
        case WeatherLevel::High: return "high";
    }
    return "?";
}
const char* to_string(WeatherPhenomenon v) {
    switch (v) {
        case WeatherPhenomenon::Rain: return "rain";
        case WeatherPhenomenon::Fog: return "fog";
        case WeatherPhenomenon::Wetness: return "wetness";
    }
    return "?";
}
const char* to_string(TimeOfDay v) {
    switch (v) {
        case TimeOfDay::Morning: return "morning";
        case TimeOfDay::Noon: return "noon";
        case TimeOfDay::Night: return "night";
    }
    return "?";
}
const char* to_string(NpcBehavior v) {
    switch (v) {
        case NpcBehavior::DriveAhead: return "drive_ahead";
        case NpcBehavior::Overtake: return "overtake";
        case NpcBehavior::DriveOpposite: return "drive_opposite";
        case NpcBehavior::CrossRoad: return "cross_road";
        case NpcBehavior::LaneChange: return "lane_change";
    }
    return "?";
}
const char* to_string(LaneRel v) {
    switch (v) {
        case LaneRel::Current: return "current";
        case LaneRel::Left: return "left";
        case LaneRel::Right: return "right";
    }
    return "?";
}
const char* to_string(DistMode v) { return v == DistMode::Near ? "near" : "far"; }
const char* to_string(VehicleSize v) { return v == VehicleSize::Small ? "small" : "large"; }
const char* to_string(VehicleType v) {
    switch (v) {
        case VehicleType::Jeep: return "jeep";
        case VehicleType::Sedan: return "sedan";
        case VehicleType::SUV: return "suv";
        case VehicleType::Hatchback: return "hatchback";
        case VehicleType::BoxTruck: return "box_truck";
        case VehicleType::SchoolBus: return "school_bus";
    }
    return "?";
}
const char* to_string(VehicleColor v) {
    switch (v) {
        case VehicleColor::Pink: return "pink";
        case VehicleColor::White: return "white";
        case VehicleColor::Red: return "red";
        case VehicleColor::Black: return "black";
        case VehicleColor::SkyBlue: return "sky_blue";
        case VehicleColor::Yellow: return "yellow";
    }
    return "?";
}
const char* to_string(CrossingDirection v) {
    return v == CrossingDirection::LeftToRight ? "left_to_right" : "right_to_left";
}

VehicleSize size_of(VehicleType type) {
    return type == VehicleType::BoxTruck || type == VehicleType::SchoolBus ? VehicleSize::Large
                                                                          : VehicleSize::Small;
}

std::string Action::description() const {
    switch (kind) {
        case Kind::SetWeather:
            return std::string("set_weather ") + to_string(phenomenon) + " " + to_string(level);
        case Kind::AdvanceTime: return "advance_time";
        case Kind::SpawnNpc:
            return std::string("spawn_npc ") + to_string(behavior) + " " + to_string(lane_rel) +
                   " " + to_string(dist_mode);
        case Kind::SpawnPedestrian:
            return std::string("spawn_pedestrian ") + to_string(direction);
    }
    return "?";
}

const std::vector<Action>& enumerate_actions() {
    static const std::vector<Action> actions = [] {
        std::vector<Action> out;
        int idx = 0;
        for (auto p : {WeatherPhenomenon::Rain, WeatherPhenomenon::Fog, WeatherPhenomenon::Wetness})
            for (auto l : {WeatherLevel::None, WeatherLevel::Light, WeatherLevel::Moderate,
                           WeatherLevel::High}) {
                Action a;
                a.index = idx++;
                a.kind = Action::Kind::SetWeather;
                a.phenomenon = p;
                a.level = l;
                out.push_back(a);
            }
        {
            Action a;
            a.index = idx++;
            a.kind = Action::Kind::AdvanceTime;
            out.push_back(a);
        }
        for (auto b : {NpcBehavior::DriveAhead, NpcBehavior::Overtake, NpcBehavior::DriveOpposite,
                       NpcBehavior::CrossRoad, NpcBehavior::LaneChange})
            for (auto lr : {LaneRel::Current, LaneRel::Left, LaneRel::Right})
                for (auto dm : {DistMode::Near, DistMode::Far}) {
                    Action a;
                    a.index = idx++;
                    a.kind = Action::Kind::SpawnNpc;
                    a.behavior = b;
                    a.lane_rel = lr;
                    a.dist_mode = dm;
                    out.push_back(a);
                }
        for (auto d : {CrossingDirection::LeftToRight, CrossingDirection::RightToLeft}) {
            Action a;
            a.index = idx++;
            a.kind = Action::Kind::SpawnPedestrian;
            a.direction = d;
            out.push_back(a);
        }
        return out;
    }();
    return actions;
}

std::vector<TimeOfDay> legal_time_successors(TimeOfDay t) {
    switch (t) {
        case TimeOfDay::Morning: return {TimeOfDay::Morning, TimeOfDay::Noon};
        case TimeOfDay::Noon: return {TimeOfDay::Noon, TimeOfDay::Night};
        case TimeOfDay::Night: return {TimeOfDay::Night, TimeOfDay::Morning};
    }
    return {};
}

TimeOfDay advance_time(TimeOfDay t) {
    switch (t) {
        case TimeOfDay::Morning: return TimeOfDay::Noon;
        case TimeOfDay::Noon: return TimeOfDay::Night;
        case TimeOfDay::Night: return TimeOfDay::Morning;
    }
    return TimeOfDay::Morning;
}

double spawn_distance(DistMode dist_mode, VehicleSize size, double speed,
                      const SpawnWeights& weights, NpcBehavior behavior) {
    double f_d;
    if (dist_mode == DistMode::Near)
        f_d = behavior == NpcBehavior::DriveOpposite ? 20.0 : 12.0;
    else
        f_d = 50.0;
    double f_v = size == VehicleSize::Large ? 3.0 : 0.0;
    double f_s = weights.f_s_coeff * speed;
    return weights.alpha * f_d + weights.beta * f_v + weights.gamma * f_s;
}

namespace {

// Points of `lane` from arc position s_from to the end, ~1 m spacing.
std::vector<Vec2> lane_tail(const Lane& lane, double s_from) {
    std::vector<Vec2> pts;
    double len = lane.length();
    for (double s = s_from; s < len; s += 1.0) pts.push_back(lane.point_at(s));
    pts.push_back(lane.point_at(len));
    return pts;
}

// Path that follows `from` for lead_in meters, then slides laterally onto
// `to` over blend_len meters and follows it to the end.
std::vector<Vec2> blend_path(const Lane& from, double s_from, const Lane& to, double lead_in,
                             double blend_len) {
    std::vector<Vec2> pts;
    double s_to = to.project(from.point_at(s_from));
    double from_len = from.length(), to_len = to.length();
    for (double s = 0.0;; s += 1.0) {
        double w = s <= lead_in ? 0.0 : std::min((s - lead_in) / blend_len, 1.0);
        Vec2 a = from.point_at(std::min(s_from + s, from_len));
        Vec2 b = to.point_at(std::min(s_to + s, to_len));
        pts.push_back(a * (1.0 - w) + b * w);
        if (s_to + s >= to_len && s_from + s >= from_len) break;
        if (s > 400.0) break;
    }
    return pts;
}

struct LaneResolution {
    const Lane* lane{nullptr};
    std::string error;
};

LaneResolution resolve_spawn_lane(const RoadNetwork& road, const ActorState& ego, LaneRel rel,
                                  NpcBehavior behavior) {
    int ego_lane_id = road.member_lane(ego.position, ego.half_width);
    const Lane* ego_lane = road.lane(ego_lane_id);
    if (!ego_lane || ego_lane->direction_sign < 0) {
        // fall back to the nearest route lane
        ego_lane = road.lane(road.route.front());
        for (int id : road.route) {
            const Lane* l = road.lane(id);
            double d1 = 0.0, d2 = 0.0;
            ego_lane->project(ego.position, &d1);
            l->project(ego.position, &d2);
            if (d2 < d1) ego_lane = l;
        }
    }

    if (behavior == NpcBehavior::DriveOpposite) {
        // nearest opposite-direction lane; Right picks the farther one
        std::vector<const Lane*> opp;
        for (const auto& l : road.lanes)
            if (l.direction_sign < 0) opp.push_back(&l);
        if (opp.empty()) return {nullptr, "no opposite-direction lane"};
        std::sort(opp.begin(), opp.end(), [&](const Lane* a, const Lane* b) {
            double da = 0.0, db = 0.0;
            a->project(ego.position, &da);
            b->project(ego.position, &db);
            return da < db;
        });
        return {rel == LaneRel::Right && opp.size() > 1 ? opp[1] : opp[0], ""};
    }

    if (behavior == NpcBehavior::CrossRoad && rel == LaneRel::Current) {
        // cut-in plans start in a neighbor and merge into the ego lane
        if (ego_lane->right_neighbor) return {road.lane(*ego_lane->right_neighbor), ""};
        if (ego_lane->left_neighbor) return {road.lane(*ego_lane->left_neighbor), ""};
        return {nullptr, "no adjacent lane for cut-in"};
    }

    switch (rel) {
        case LaneRel::Current: return {ego_lane, ""};
        case LaneRel::Left:
            if (!ego_lane->left_neighbor) return {nullptr, "no left-adjacent lane"};
            return {road.lane(*ego_lane->left_neighbor), ""};
        case LaneRel::Right:
            if (!ego_lane->right_neighbor) return {nullptr, "no right-adjacent lane"};
            return {road.lane(*ego_lane->right_neighbor), ""};
    }
    return {nullptr, "unresolved lane"};
}

}  // namespace

double required_deceleration(const SpawnCandidate& cand, const ActorState& ego, double horizon_s,
                             const SafetyParams& safety) {
    if (ego.speed < 1e-9) return 0.0;
    ActorState cs = cand.state;
    cs.speed = cand.command_speed;
    auto hit = trajectory_intersection(ego, cs, horizon_s);
    double stop_distance;
    if (hit) {
        stop_distance = (hit->point - ego.position).norm();
    } else {
        // parallel geometry: only a candidate inside the ego's forward
        // corridor forces a stop; offset lanes pass without conflict
        Vec2 rel = cand.state.position - ego.position;
        Vec2 fwd = from_heading(ego.heading);
        double ahead = rel.dot(fwd);
        if (ahead <= 0.0) return 0.0;  // behind the ego
        double lateral = std::abs(rel.cross(fwd));
        if (lateral > cand.state.half_width + ego.half_width + 0.5) return 0.0;
        double closing = ego.speed - cand.command_speed * from_heading(cand.state.heading).dot(fwd);
        if (closing <= 0.0) return 0.0;
        double gap = std::max(ahead - safety.r_min, 0.1);
        return closing * closing / (2.0 * gap);
    }
    double gap = std::max(stop_distance - safety.r_min, 0.1);
    return ego.speed * ego.speed / (2.0 * gap);
}

RealismCheck validate_realism(const SpawnCandidate& cand, const ActorState& ego,
                              const RoadNetwork& road, const KinematicsParams& kin,
                              double horizon_s, const SafetyParams& safety) {
    // (a) on a valid lane (pedestrians may start on the verge near a lane)
    if (cand.state.kind == ActorKind::Pedestrian) {
        double d = 1e300;
        for (const auto& l : road.lanes) {
            double di = 0.0;
            l.project(cand.state.position, &di);
            d = std::min(d, di);
        }
        if (d > 12.0) return {false, "spawn point off the road verge"};
    } else {
        if (road.member_lane(cand.state.position, cand.state.half_width) < 0)
            return {false, "spawn point off every lane"};
    }

    // (b) minimum spawn distance
    double d_ego = (cand.state.position - ego.position).norm();
    if (d_ego + 1e-9 < cand.min_distance) return {false, "below minimum spawn distance"};

    // (c) the planned trajectory must be able to intersect the ego's
    ActorState cs = cand.state;
    cs.speed = cand.command_speed;
    bool intersects = trajectory_intersection(ego, cs, horizon_s).has_value();
    if (!intersects) {
        // same-road traffic: planned positions passing close to the route
        auto route = road.route_polyline();
        double horizon_len = cand.command_speed * horizon_s;
        double travelled = 0.0;
        for (std::size_t i = 0; i + 1 < cand.path.size() && travelled <= horizon_len; ++i) {
            travelled += (cand.path[i + 1] - cand.path[i]).norm();
            for (std::size_t j = 0; j + 1 < route.size(); ++j) {
                if (point_segment_distance(cand.path[i], route[j], route[j + 1]) < 5.25) {
                    intersects = true;
                    break;
                }
            }
            if (intersects) break;
        }
    }
    if (!intersects) return {false, "no trajectory intersection"};

    // (d) the ego must be able to avoid the candidate
    if (required_deceleration(cand, ego, horizon_s, safety) > kin.b_max + 1e-9)
        return {false, "collision unavoidable at spawn"};

    return {true, ""};
}

ApplyResult apply_action(const EnvironmentConfig& env, const Action& action, World& world, Rng& rng,
                         const ActionCaps& caps, const SpawnWeights& weights,
                         const SafetyParams& safety, double horizon_s) {
    ApplyResult result;
    result.env = env;

    switch (action.kind) {
        case Action::Kind::SetWeather:
            result.env.set_level(action.phenomenon, action.level);
            return result;
        case Action::Kind::AdvanceTime:
            result.env.time_of_day = advance_time(env.time_of_day);
            return result;
        case Action::Kind::SpawnNpc: {
            if (int(env.npcs.size()) >= caps.max_npcs) {
                result.spawn_rejected = true;
                result.reject_reason = "npc roster full";
                return result;
            }
            const RoadNetwork& road = world.road();
            const ActorState& ego = world.ego();

            NpcSpec spec;
            spec.behavior = action.behavior;
            spec.lane_rel = action.lane_rel;
            spec.dist_mode = action.dist_mode;
            double v_hi = std::min(20.0, road.speed_limit);
            spec.speed = rng.uniform(10.0, std::max(v_hi, 10.0 + 1e-6));
            spec.vehicle_type = static_cast<VehicleType>(rng.uniform_int(6));
            spec.color = static_cast<VehicleColor>(rng.uniform_int(6));
            spec.size = size_of(spec.vehicle_type);

            auto res = resolve_spawn_lane(road, ego, action.lane_rel, action.behavior);
            if (!res.lane) {
                result.spawn_rejected = true;
                result.reject_reason = res.error;
                return result;
            }
            const Lane& lane = *res.lane;

            double min_dist =
                spawn_distance(action.dist_mode, spec.size, spec.speed, weights, action.behavior);

            SpawnCandidate cand;
            cand.command_speed = spec.speed;
            cand.min_distance = min_dist;
            auto fp = footprint_for(spec.size == VehicleSize::Large ? ActorKind::NpcLarge
                                                                    : ActorKind::NpcSmall);
            cand.state.kind = spec.size == VehicleSize::Large ? ActorKind::NpcLarge : ActorKind::NpcSmall;
            cand.state.half_length = fp.half_length;
            cand.state.half_width = fp.half_width;
            cand.state.speed = spec.speed;

            double s_ego = lane.project(ego.position);
            double s_spawn;
            if (action.behavior == NpcBehavior::Overtake) {
                s_spawn = s_ego - min_dist;
                if (s_spawn < 2.0) {
                    result.spawn_rejected = true;
                    result.reject_reason = "spawn position off-map";
                    return result;
                }
            } else if (action.behavior == NpcBehavior::DriveOpposite) {
                // opposite lanes run toward the ego: "ahead" is at smaller s
                Vec2 p_ahead = ego.position + from_heading(ego.heading) * min_dist;
                s_spawn = lane.project(p_ahead);
            } else {
                s_spawn = s_ego + min_dist;
            }
            if (s_spawn > lane.length() - 2.0) {
                result.spawn_rejected = true;
                result.reject_reason = "spawn position off-map";
                return result;
            }

            // plan the scripted path
            std::vector<Vec2> path;
            const Lane* ego_lane = road.lane(road.member_lane(ego.position, ego.half_width));
            if (!ego_lane || ego_lane->direction_sign < 0) ego_lane = road.lane(road.route.front());
            switch (action.behavior) {
                case NpcBehavior::DriveAhead:
                case NpcBehavior::Overtake:
                case NpcBehavior::DriveOpposite:
                    path = lane_tail(lane, s_spawn);
                    break;
                case NpcBehavior::CrossRoad:
                    path = blend_path(lane, s_spawn, *ego_lane, 8.0, 12.0);
                    break;
                case NpcBehavior::LaneChange: {
                    const Lane* target = &lane != ego_lane             ? ego_lane
                                         : lane.right_neighbor         ? road.lane(*lane.right_neighbor)
                                         : lane.left_neighbor          ? road.lane(*lane.left_neighbor)
                                                                       : nullptr;
                    if (!target) {
                        result.spawn_rejected = true;
                        result.reject_reason = "no lane-change target";
                        return result;
                    }
                    path = blend_path(lane, s_spawn, *target, 10.0, 30.0);
                    break;
                }
            }
            if (path.size() < 2) {
                result.spawn_rejected = true;
                result.reject_reason = "degenerate spawn path";
                return result;
            }
            cand.state.position = path.front();
            cand.state.heading = std::atan2(path[1].y - path[0].y, path[1].x - path[0].x);
            cand.path = path;

            auto check = validate_realism(cand, ego, road, world.kinematics(), horizon_s, safety);
            if (!check.ok) {
                result.spawn_rejected = true;
                result.reject_reason = check.reason;
                return result;
            }

            SpawnedActor actor;
            actor.state = cand.state;
            actor.npc = spec;
            actor.command_speed = spec.speed;
            actor.spawn_ego_speed = ego.speed;
            actor.spawn_distance_to_ego = (cand.state.position - ego.position).norm();
            actor.spawn_required_decel = required_deceleration(cand, ego, horizon_s, safety);
            actor.set_path(std::move(path));
            actor.state.lane_id = road.member_lane(actor.state.position, actor.state.half_width);
            result.spawned_ids.push_back(world.add_actor(std::move(actor)));
            result.env.npcs.push_back(spec);
            return result;
        }
        case Action::Kind::SpawnPedestrian: {
            if (int(env.pedestrians.size()) >= caps.max_pedestrians) {
                result.spawn_rejected = true;
                result.reject_reason = "pedestrian roster full";
                return result;
            }
            const RoadNetwork& road = world.road();
            const ActorState& ego = world.ego();

            PedestrianSpec spec;
            spec.crossing_direction = action.direction;
            spec.speed = rng.uniform(0.8, 1.4);
            spec.spawn_distance_ahead = 40.0;

            Vec2 fwd = from_heading(ego.heading);
            Vec2 left = fwd.perp();
            Vec2 center = ego.position + fwd * spec.spawn_distance_ahead;
            double half_span = 10.0;  // covers the full carriageway
            Vec2 start, end;
            if (action.direction == CrossingDirection::LeftToRight) {
                start = center + left * half_span;
                end = center - left * half_span;
            } else {
                start = center - left * half_span;
                end = center + left * half_span;
            }

            SpawnCandidate cand;
            cand.command_speed = spec.speed;
            cand.min_distance = spec.spawn_distance_ahead * 0.8;  // diagonal start point
            auto fp = footprint_for(ActorKind::Pedestrian);
            cand.state.kind = ActorKind::Pedestrian;
            cand.state.half_length = fp.half_length;
            cand.state.half_width = fp.half_width;
            cand.state.speed = spec.speed;
            cand.state.position = start;
            cand.state.heading = std::atan2(end.y - start.y, end.x - start.x);
            cand.path = {start, end};

            auto check = validate_realism(cand, ego, road, world.kinematics(), horizon_s, safety);
            if (!check.ok) {
                result.spawn_rejected = true;
                result.reject_reason = check.reason;
                return result;
            }

            SpawnedActor actor;
            actor.state = cand.state;
            actor.ped = spec;
            actor.command_speed = spec.speed;
            actor.spawn_ego_speed = ego.speed;
            actor.spawn_distance_to_ego = (start - ego.position).norm();
            actor.spawn_required_decel = required_deceleration(cand, ego, horizon_s, safety);
            actor.set_path({start, end});
            actor.state.lane_id = kOffLaneId;
            result.spawned_ids.push_back(world.add_actor(std::move(actor)));
            result.env.pedestrians.push_back(spec);
            return result;
        }
    }
    return result;
}

std::string action_catalog_json() {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& a : enumerate_actions()) {
        j.push_back({{"index", a.index}, {"description", a.description()}});
    }
    return j.dump(2);
}

}  // namespace scengen
