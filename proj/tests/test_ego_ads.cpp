#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "scengen/episode.hpp"
#include "scengen/perception.hpp"

using namespace scengen;

namespace {
const LayoutId kAllLayouts[] = {LayoutId::LShapedJunction, LayoutId::CornerIntersection,
                                LayoutId::MultiLaneCrossroad, LayoutId::CurvedBoulevard};

World make_world(LayoutId id = LayoutId::LShapedJunction) { return World(build_road(id)); }

void add_npc_ahead(World& world, double ahead, double speed = 0.0) {
    SpawnedActor a;
    a.state.kind = ActorKind::NpcSmall;
    auto fp = footprint_for(ActorKind::NpcSmall);
    a.state.half_length = fp.half_length;
    a.state.half_width = fp.half_width;
    a.state.position = world.ego().position + from_heading(world.ego().heading) * ahead;
    a.state.heading = world.ego().heading;
    a.state.speed = speed;
    a.command_speed = speed;
    a.state.lane_id = world.ego().lane_id;
    world.add_actor(std::move(a));
}
}  // namespace

TEST_CASE("sense perceives a clear-weather actor at 20 m") {
    World world = make_world();
    add_npc_ahead(world, 20.0);
    EnvironmentConfig env;
    PerceptionModel model;
    auto seen = sense(world, env, model, 42);
    REQUIRE(seen.size() == 1);
}

TEST_CASE("sense drops an actor beyond the fog-degraded range") {
    World world = make_world();
    add_npc_ahead(world, 30.0);
    EnvironmentConfig env;
    env.fog = WeatherLevel::High;  // 60 m * 0.4 = 24 m effective
    PerceptionModel model;
    CHECK(model.effective_range(env) == doctest::Approx(24.0));
    CHECK(sense(world, env, model, 42).empty());
    env.fog = WeatherLevel::None;
    CHECK(sense(world, env, model, 42).size() == 1);
}

TEST_CASE("sense of an empty world is empty") {
    World world = make_world();
    CHECK(sense(world, EnvironmentConfig{}, PerceptionModel{}, 0).empty());
}

TEST_CASE("range and brake multiplier tables") {
    using P = WeatherPhenomenon;
    using L = WeatherLevel;
    CHECK(PerceptionModel::range_multiplier(P::Rain, L::None) == 1.0);
    CHECK(PerceptionModel::range_multiplier(P::Rain, L::Light) == doctest::Approx(0.9));
    CHECK(PerceptionModel::range_multiplier(P::Rain, L::Moderate) == doctest::Approx(0.75));
    CHECK(PerceptionModel::range_multiplier(P::Rain, L::High) == doctest::Approx(0.6));
    CHECK(PerceptionModel::range_multiplier(P::Fog, L::Light) == doctest::Approx(0.8));
    CHECK(PerceptionModel::range_multiplier(P::Fog, L::Moderate) == doctest::Approx(0.6));
    CHECK(PerceptionModel::range_multiplier(P::Fog, L::High) == doctest::Approx(0.4));
    CHECK(PerceptionModel::range_multiplier(P::Wetness, L::High) == 1.0);
    CHECK(PerceptionModel::brake_multiplier(L::None) == 1.0);
    CHECK(PerceptionModel::brake_multiplier(L::Light) == doctest::Approx(0.95));
    CHECK(PerceptionModel::brake_multiplier(L::Moderate) == doctest::Approx(0.9));
    CHECK(PerceptionModel::brake_multiplier(L::High) == doctest::Approx(0.8));
}

TEST_CASE("milder degradation perceives a superset under the same seed") {
    World world = make_world();
    Rng rng(5);
    for (int i = 0; i < 30; ++i) {
        add_npc_ahead(world, rng.uniform(5.0, 70.0), rng.uniform(0.0, 10.0));
    }
    PerceptionModel model;
    const WeatherLevel levels[] = {WeatherLevel::High, WeatherLevel::Moderate, WeatherLevel::Light,
                                   WeatherLevel::None};
    std::set<int> prev;
    bool first = true;
    for (WeatherLevel l : levels) {  // severe to mild
        EnvironmentConfig env;
        env.fog = l;
        env.time_of_day = TimeOfDay::Night;
        std::set<int> ids;
        for (const auto& o : sense(world, env, model, 77)) ids.insert(o.id);
        if (!first)
            for (int id : prev) CHECK(ids.count(id) == 1);
        prev = ids;
        first = false;
    }
}

TEST_CASE("controller accelerates on a free road") {
    RoadNetwork road = build_road(LayoutId::LShapedJunction);
    World world(road);
    EgoController ctrl(world.road());
    world.ego().speed = 5.0;
    Control c = ctrl.plan({}, world.ego(), road.speed_limit);
    CHECK(c.throttle > 0.0);
    CHECK(c.brake == 0.0);
}

TEST_CASE("controller emergency-brakes on a same-lane leader inside the safety distance") {
    World world = make_world();
    add_npc_ahead(world, 10.0, 0.0);  // stopped car 10 m ahead
    EgoController ctrl(world.road());
    world.ego().speed = 12.0;  // losd(12,0) = 12 > gap
    Control c = ctrl.plan(world.obstacles(), world.ego(), world.road().speed_limit);
    CHECK(c.brake == doctest::Approx(1.0));
    CHECK(ctrl.emergency_braking());
}

TEST_CASE("controller coasts at the speed limit") {
    RoadNetwork road = build_road(LayoutId::MultiLaneCrossroad);
    World world(road);
    EgoController ctrl(world.road());
    world.ego().speed = road.speed_limit;
    Control c = ctrl.plan({}, world.ego(), road.speed_limit);
    CHECK(c.throttle == doctest::Approx(0.0).epsilon(0.05));
    CHECK(c.brake == doctest::Approx(0.0));
}

TEST_CASE("internal state snapshot at rest and its normalization inputs") {
    World world = make_world();
    EgoController ctrl(world.road());
    ctrl.plan({}, world.ego(), world.road().speed_limit);
    InternalState s = ctrl.internal_state(world.ego(), 0.4, 0.0);
    CHECK(s.speed == 0.0);
    CHECK(s.brake == 0.0);
    CHECK(s.route_progress == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(s.perception_range_frac == doctest::Approx(0.4));
    CHECK(s.localization_ok == 1.0);
    CHECK(s.plan_feasible == 1.0);
    // all 12 fields finite
    for (double v : {s.speed, s.acceleration, s.heading_error, s.throttle, s.brake, s.steer,
                     s.lane_offset, s.route_progress, s.localization_ok, s.perception_range_frac,
                     s.plan_feasible, s.control_error})
        CHECK(std::isfinite(v));
}

TEST_CASE("clear world: ego completes the route on every layout without collisions") {
    for (LayoutId id : kAllLayouts) {
        EpisodeConfig cfg;
        cfg.layout = id;
        cfg.record_ticks = false;
        // weather no-op on every step: never spawns anything
        Policy noop = [](const std::vector<double>&, const std::vector<bool>&, Rng&) { return 0; };
        EpisodeTrace t = run_episode(cfg, 1234, noop);
        CHECK(t.cause == TerminalCause::DestinationReached);
        CHECK_FALSE(t.time_to_collision.has_value());
    }
}

TEST_CASE("controller never commands throttle and brake together") {
    World world = make_world(LayoutId::CurvedBoulevard);
    EgoController ctrl(world.road());
    for (int i = 0; i < 600; ++i) {
        Control c = ctrl.plan(world.obstacles(), world.ego(), world.road().speed_limit);
        CHECK(c.throttle * c.brake == doctest::Approx(0.0));
        CHECK(c.throttle >= 0.0);
        CHECK(c.throttle <= 1.0);
        CHECK(c.brake >= 0.0);
        CHECK(c.brake <= 1.0);
        CHECK(c.steer >= -1.0);
        CHECK(c.steer <= 1.0);
        world.step(c, 0.1);
    }
}
