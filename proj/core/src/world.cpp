#include "scengen/world.hpp"

#include <algorithm>
#include <cmath>

namespace scengen {

void SpawnedActor::set_path(std::vector<Vec2> pts) {
    path = std::move(pts);
    path_cumlen.resize(path.size());
    double s = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i > 0) s += (path[i] - path[i - 1]).norm();
        path_cumlen[i] = s;
    }
    path_s = 0.0;
    if (path.size() >= 2) {
        state.position = path.front();
        state.heading = std::atan2(path[1].y - path[0].y, path[1].x - path[0].x);
    }
}

void SpawnedActor::advance(double dt, const RoadNetwork& road) {
    state.speed = command_speed;
    state.acceleration = 0.0;
    double total = path_cumlen.empty() ? 0.0 : path_cumlen.back();
    if (path_s < total && path.size() >= 2) {
        path_s = std::min(path_s + command_speed * dt, total);
        auto it = std::lower_bound(path_cumlen.begin(), path_cumlen.end(), path_s);
        std::size_t i = std::min<std::size_t>(std::distance(path_cumlen.begin(), it), path.size() - 1);
        if (i == 0) i = 1;
        double seg = path_cumlen[i] - path_cumlen[i - 1];
        double t = seg < 1e-12 ? 1.0 : (path_s - path_cumlen[i - 1]) / seg;
        state.position = path[i - 1] + (path[i] - path[i - 1]) * t;
        state.heading = std::atan2(path[i].y - path[i - 1].y, path[i].x - path[i - 1].x);
    } else {
        state.position += from_heading(state.heading) * (command_speed * dt);
    }
    int member = road.member_lane(state.position, state.half_width);
    state.lane_id = state.kind == ActorKind::Pedestrian && member < 0 ? kOffLaneId
                    : member >= 0                                     ? member
                                                                      : road.nearest_lane(state.position);
}

World::World(RoadNetwork road, KinematicsParams kin) : road_(std::move(road)), kin_(kin) {
    const Lane* first = road_.lane(road_.route.front());
    ego_.kind = ActorKind::Ego;
    auto fp = footprint_for(ActorKind::Ego);
    ego_.half_length = fp.half_length;
    ego_.half_width = fp.half_width;
    ego_.position = road_.origin;
    ego_.heading = std::atan2(first->tangent_at(first->project(road_.origin)).y,
                              first->tangent_at(first->project(road_.origin)).x);
    ego_.lane_id = first->id;
}

int World::add_actor(SpawnedActor actor) {
    actor.id = next_id_++;
    actor.spawn_tick = tick_;
    actors_.push_back(std::move(actor));
    return actors_.back().id;
}

void World::step(const Control& ego_control, double dt, double brake_scale) {
    KinematicsParams kin = kin_;
    kin.b_max *= brake_scale;
    ego_ = step_actor(ego_, ego_control, dt, kin, &road_);
    for (auto& a : actors_) a.advance(dt, road_);
    ++tick_;
}

std::optional<int> World::ego_collision() const {
    for (const auto& a : actors_)
        if (detect_collision(ego_, a.state)) return a.id;
    return std::nullopt;
}

std::vector<Obstacle> World::obstacles() const {
    std::vector<Obstacle> out;
    out.reserve(actors_.size());
    for (const auto& a : actors_) out.push_back({a.id, a.state});
    return out;
}

}  // namespace scengen
