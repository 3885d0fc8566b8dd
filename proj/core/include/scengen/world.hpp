#pragma once

#include <optional>
#include <vector>

#include "scengen/actor.hpp"
#include "scengen/collision.hpp"
#include "scengen/env_config.hpp"
#include "scengen/road.hpp"
#include "scengen/safety.hpp"

namespace scengen {

/// A spawned traffic participant plus its scripted path and the audit
/// snapshot recorded at spawn time.
struct SpawnedActor {
    int id{0};
    ActorState state;
    std::optional<NpcSpec> npc;        // vehicle participants
    std::optional<PedestrianSpec> ped; // pedestrian participants

    // Scripted path: the actor advances along this polyline at command_speed
    // and continues straight once the path is exhausted.
    std::vector<Vec2> path;
    std::vector<double> path_cumlen;
    double path_s{0.0};
    double command_speed{0.0};

    // Spawn-time audit snapshot for the avoidability re-check.
    int spawn_tick{0};
    double spawn_ego_speed{0.0};
    double spawn_distance_to_ego{0.0};
    double spawn_required_decel{0.0};
    bool forced{false};  // spawned with realism validation bypassed

    void set_path(std::vector<Vec2> pts);
    void advance(double dt, const RoadNetwork& road);
};

/// Deterministic 2D world: one ego, scripted traffic participants, fixed-dt
/// stepping, and per-tick ego collision queries. Single-threaded per
/// instance; instances are independent.
class World {
public:
    World(RoadNetwork road, KinematicsParams kin = {});

    const RoadNetwork& road() const { return road_; }
    const KinematicsParams& kinematics() const { return kin_; }

    ActorState& ego() { return ego_; }
    const ActorState& ego() const { return ego_; }

    std::vector<SpawnedActor>& actors() { return actors_; }
    const std::vector<SpawnedActor>& actors() const { return actors_; }

    int tick() const { return tick_; }
    double sim_time(double dt) const { return tick_ * dt; }

    int add_actor(SpawnedActor actor);  // returns id

    /// Advance ego (bicycle model under `ego_control`, with braking scaled
    /// by `brake_scale` for wet roads) and all scripted actors by dt.
    void step(const Control& ego_control, double dt, double brake_scale = 1.0);

    /// Id of the first actor colliding with the ego this tick, or nullopt.
    std::optional<int> ego_collision() const;

    std::vector<Obstacle> obstacles() const;

private:
    RoadNetwork road_;
    KinematicsParams kin_;
    ActorState ego_;
    std::vector<SpawnedActor> actors_;
    int next_id_{1};
    int tick_{0};
};

}  // namespace scengen
