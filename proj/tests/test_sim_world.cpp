#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "scengen/actor.hpp"
#include "scengen/collision.hpp"
#include "scengen/road.hpp"
#include "scengen/rng.hpp"

using namespace scengen;

namespace {
const LayoutId kAllLayouts[] = {LayoutId::LShapedJunction, LayoutId::CornerIntersection,
                                LayoutId::MultiLaneCrossroad, LayoutId::CurvedBoulevard};

ActorState random_actor(Rng& rng) {
    ActorState a;
    a.position = {rng.uniform(-50.0, 50.0), rng.uniform(-50.0, 50.0)};
    a.heading = rng.uniform(-M_PI, M_PI);
    a.speed = rng.uniform(0.0, 25.0);
    if (rng.uniform() < 0.2) {
        a.kind = ActorKind::Pedestrian;
        a.half_length = a.half_width = 0.3;
    } else {
        a.half_length = rng.uniform(1.0, 5.0);
        a.half_width = rng.uniform(0.5, 1.5);
    }
    return a;
}
}  // namespace

TEST_CASE("road layouts have the advertised shapes") {
    RoadNetwork l = build_road(LayoutId::LShapedJunction);
    int fwd = 0, opp = 0;
    for (const auto& lane : l.lanes) (lane.direction_sign > 0 ? fwd : opp)++;
    CHECK(fwd == 2);
    CHECK(opp == 2);

    RoadNetwork m = build_road(LayoutId::MultiLaneCrossroad);
    int same_dir_main = 0;
    for (const auto& lane : m.lanes)
        if (lane.direction_sign > 0 && std::abs(lane.centerline.front().y - lane.centerline.back().y) < 20.0)
            same_dir_main++;
    CHECK(same_dir_main >= 3);
}

TEST_CASE("build_road is deterministic") {
    for (LayoutId id : kAllLayouts)
        CHECK(build_road(id).to_json() == build_road(id).to_json());
}

TEST_CASE("road invariants hold on every layout") {
    for (LayoutId id : kAllLayouts) {
        RoadNetwork net = build_road(id);
        CHECK(!net.route.empty());
        for (const auto& lane : net.lanes) {
            CHECK(lane.centerline.size() >= 2);
            CHECK(lane.width > 0.0);
            if (lane.left_neighbor) {
                const Lane* n = net.lane(*lane.left_neighbor);
                REQUIRE(n != nullptr);
                CHECK(n->right_neighbor == lane.id);  // adjacency symmetric
            }
            if (lane.right_neighbor) {
                const Lane* n = net.lane(*lane.right_neighbor);
                REQUIRE(n != nullptr);
                CHECK(n->left_neighbor == lane.id);
            }
        }
        for (int id2 : net.route) CHECK(net.lane(id2) != nullptr);
        // origin and destination on a centerline
        double d_orig = 1e300, d_dest = 1e300, d = 0.0;
        for (const auto& lane : net.lanes) {
            lane.project(net.origin, &d);
            d_orig = std::min(d_orig, d);
            lane.project(net.destination, &d);
            d_dest = std::min(d_dest, d);
        }
        CHECK(d_orig < 0.5);
        CHECK(d_dest < 0.5);
    }
}

TEST_CASE("road json round-trips") {
    RoadNetwork net = build_road(LayoutId::CornerIntersection);
    RoadNetwork back = RoadNetwork::from_json(net.to_json());
    CHECK(back.to_json() == net.to_json());
}

TEST_CASE("step_actor coasting") {
    ActorState a;
    a.position = {0, 0};
    a.speed = 10.0;
    ActorState b = step_actor(a, Control{}, 1.0);
    CHECK(b.speed == doctest::Approx(10.0));
    CHECK(b.position.x == doctest::Approx(10.0));
    CHECK(b.position.y == doctest::Approx(0.0));
}

TEST_CASE("step_actor clamps speed at zero") {
    ActorState a;
    a.speed = 0.0;
    ActorState b = step_actor(a, Control{0.0, 1.0, 0.0}, 1.0);
    CHECK(b.speed == 0.0);
}

TEST_CASE("step_actor braking arithmetic") {
    ActorState a;
    a.speed = 10.0;
    ActorState b = step_actor(a, Control{0.0, 1.0, 0.0}, 0.5);
    CHECK(b.speed == doctest::Approx(7.0));
}

TEST_CASE("step_actor rejects non-finite input") {
    ActorState a;
    a.speed = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(step_actor(a, Control{}, 0.1), NumericDomainError);
}

TEST_CASE("step_actor energy sanity and determinism") {
    Rng rng(2024);
    for (int i = 0; i < 200; ++i) {
        ActorState a = random_actor(rng);
        Control c;
        c.steer = rng.uniform(-1.0, 1.0);
        ActorState coast = step_actor(a, c, 0.1);
        CHECK(coast.speed <= a.speed + 1e-12);  // throttle 0: non-increasing
        CHECK(coast.speed == doctest::Approx(a.speed));  // no brake either: constant
        c.brake = rng.uniform(0.0, 1.0);
        ActorState braked = step_actor(a, c, 0.1);
        CHECK(braked.speed <= a.speed + 1e-12);
        ActorState again = step_actor(a, c, 0.1);
        CHECK(again.position.x == braked.position.x);
        CHECK(again.position.y == braked.position.y);
        CHECK(again.speed == braked.speed);
    }
}

TEST_CASE("detect_collision basic cases") {
    ActorState a, b;
    CHECK(detect_collision(a, b));  // identical positions

    b.position = {100, 0};
    b.half_length = 1.0;
    b.half_width = 1.0;
    a.half_length = 1.0;
    a.half_width = 1.0;
    CHECK_FALSE(detect_collision(a, b));

    // two 4 m x 2 m boxes, same heading, centers 3.9 m apart
    ActorState p, q;
    p.half_length = 2.0;
    p.half_width = 1.0;
    q = p;
    q.position = {3.9, 0};
    CHECK(detect_collision(p, q));
    q.position = {4.1, 0};
    CHECK_FALSE(detect_collision(p, q));
}

TEST_CASE("detect_collision is symmetric") {
    Rng rng(7);
    for (int i = 0; i < 500; ++i) {
        ActorState a = random_actor(rng);
        ActorState b = random_actor(rng);
        b.position = a.position + Vec2{rng.uniform(-8.0, 8.0), rng.uniform(-8.0, 8.0)};
        CHECK(detect_collision(a, b) == detect_collision(b, a));
    }
}

TEST_CASE("trajectory_intersection ray algebra") {
    ActorState a, b;
    a.position = {0, 0};
    a.heading = 0.0;
    a.speed = 10.0;
    b.position = {30, -20};
    b.heading = M_PI / 2;
    b.speed = 10.0;
    auto hit = trajectory_intersection(a, b, 10.0);
    REQUIRE(hit.has_value());
    CHECK(hit->point.x == doctest::Approx(30.0));
    CHECK(hit->point.y == doctest::Approx(0.0));
    CHECK(hit->t_a == doctest::Approx(3.0));
    CHECK(hit->t_b == doctest::Approx(2.0));
}

TEST_CASE("trajectory_intersection rejects parallel and past intersections") {
    ActorState a, b;
    a.speed = b.speed = 10.0;
    b.position = {0, 3};  // parallel offset 3 m
    CHECK_FALSE(trajectory_intersection(a, b, 10.0).has_value());

    b.position = {-5, -5};  // crossing point behind a
    b.heading = M_PI / 2;
    ActorState c = a;
    c.position = {-10, 0};
    c.heading = M_PI;  // driving away
    CHECK_FALSE(trajectory_intersection(c, b, 10.0).has_value());
}

TEST_CASE("trajectory_intersection is symmetric with swapped times") {
    Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        ActorState a = random_actor(rng);
        ActorState b = random_actor(rng);
        a.speed = rng.uniform(1.0, 20.0);
        b.speed = rng.uniform(1.0, 20.0);
        auto ab = trajectory_intersection(a, b, 20.0);
        auto ba = trajectory_intersection(b, a, 20.0);
        CHECK(ab.has_value() == ba.has_value());
        if (ab && ba) {
            CHECK(ab->point.x == doctest::Approx(ba->point.x));
            CHECK(ab->point.y == doctest::Approx(ba->point.y));
            CHECK(ab->t_a == doctest::Approx(ba->t_b));
            CHECK(ab->t_b == doctest::Approx(ba->t_a));
        }
    }
}
