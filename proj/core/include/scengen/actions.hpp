#pragma once

#include <array>
#include <string>
#include <vector>

#include "scengen/env_config.hpp"
#include "scengen/rng.hpp"
#include "scengen/world.hpp"

namespace scengen {

constexpr int kActionCount = 45;

/// One of the 45 discrete environment-configuration commands.
///
/// Stable ordering:
///   0..11   SetWeather, phenomenon-major (Rain, Fog, Wetness) x level
///           (None, Light, Moderate, High)
///   12      AdvanceTime
///   13..42  SpawnNpc, behavior-major (DriveAhead, Overtake, DriveOpposite,
///           CrossRoad, LaneChange) x lane_rel (Current, Left, Right) x
///           dist_mode (Near, Far)
///   43..44  SpawnPedestrian (LeftToRight, RightToLeft)
struct Action {
    enum class Kind { SetWeather, AdvanceTime, SpawnNpc, SpawnPedestrian };

    int index{0};
    Kind kind{Kind::SetWeather};
    WeatherPhenomenon phenomenon{WeatherPhenomenon::Rain};
    WeatherLevel level{WeatherLevel::None};
    NpcBehavior behavior{NpcBehavior::DriveAhead};
    LaneRel lane_rel{LaneRel::Current};
    DistMode dist_mode{DistMode::Near};
    CrossingDirection direction{CrossingDirection::LeftToRight};

    std::string description() const;
};

const std::vector<Action>& enumerate_actions();

/// Chronological-time constraint: the states reachable in one step.
std::vector<TimeOfDay> legal_time_successors(TimeOfDay t);

/// The unique non-identity legal successor, used by AdvanceTime.
TimeOfDay advance_time(TimeOfDay t);

struct SpawnWeights {
    double alpha{1.0};
    double beta{1.0};
    double gamma{1.0};
    double f_s_coeff{0.25};  // meters of extra distance per m/s; 0 reproduces
                             // the fixed distance tables exactly
};

/// Minimum spawn distance: alpha*f_d(dist_mode) + beta*f_v(size) +
/// gamma*f_s(speed). f_d(Near)=12 (20 for DriveOpposite), f_d(Far)=50,
/// f_v(Small)=0, f_v(Large)=3, f_s = f_s_coeff * speed.
double spawn_distance(DistMode dist_mode, VehicleSize size, double speed,
                      const SpawnWeights& weights = {},
                      NpcBehavior behavior = NpcBehavior::DriveAhead);

struct ActionCaps {
    int max_npcs{6};
    int max_pedestrians{2};
};

/// A fully specified spawn proposal awaiting realism validation.
struct SpawnCandidate {
    ActorState state;
    std::vector<Vec2> path;
    double command_speed{0.0};
    double min_distance{0.0};  // clause (b) requirement
};

struct RealismCheck {
    bool ok{false};
    std::string reason;
};

/// The four realism clauses: (a) on a valid lane/walkable verge, (b) far
/// enough from the ego, (c) trajectories can intersect within the horizon,
/// (d) the collision is avoidable at spawn time (required deceleration
/// within B_max).
RealismCheck validate_realism(const SpawnCandidate& cand, const ActorState& ego,
                              const RoadNetwork& road, const KinematicsParams& kin,
                              double horizon_s, const SafetyParams& safety = {});

/// Required ego deceleration to avoid `cand` at this instant (clause d).
double required_deceleration(const SpawnCandidate& cand, const ActorState& ego,
                             double horizon_s, const SafetyParams& safety = {});

struct ApplyResult {
    EnvironmentConfig env;
    std::vector<int> spawned_ids;
    bool spawn_rejected{false};
    std::string reject_reason;
};

/// Apply one action: weather actions overwrite a single level, AdvanceTime
/// moves to the unique legal successor, spawn actions place a validated
/// actor into the world (rejection leaves env and world unchanged).
ApplyResult apply_action(const EnvironmentConfig& env, const Action& action, World& world, Rng& rng,
                         const ActionCaps& caps = {}, const SpawnWeights& weights = {},
                         const SafetyParams& safety = {}, double horizon_s = 12.0);

/// Action catalog as JSON (index -> description), for trace decoding.
std::string action_catalog_json();

}  // namespace scengen
