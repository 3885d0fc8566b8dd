#include <benchmark/benchmark.h>

#include "scengen/episode.hpp"
#include "scengen/mlp.hpp"
#include "scengen/perception.hpp"
#include "scengen/safety.hpp"
#include "scengen/world.hpp"

using namespace scengen;

static void BM_CollisionProbability(benchmark::State& state) {
    RoadNetwork road = build_road(LayoutId::LShapedJunction);
    Rng rng(7);
    ActorState ego;
    ego.position = road.origin;
    ego.speed = 12.0;
    ego.lane_id = road.route.front();
    std::vector<Obstacle> obstacles;
    for (int i = 0; i < int(state.range(0)); ++i) {
        ActorState ob;
        ob.position = {road.origin.x + rng.uniform(5.0, 60.0), road.origin.y + rng.uniform(-4.0, 4.0)};
        ob.speed = rng.uniform(0.0, 15.0);
        ob.lane_id = road.member_lane(ob.position, ob.half_width);
        obstacles.push_back({i + 1, ob});
    }
    for (auto _ : state) {
        auto pb = collision_probability(ego, obstacles, road);
        benchmark::DoNotOptimize(pb);
    }
}
BENCHMARK(BM_CollisionProbability)->Arg(1)->Arg(8);

static void BM_MlpForward(benchmark::State& state) {
    Rng rng(11);
    Mlp net({19, 64, 64, 45}, rng);
    std::vector<double> input(19);
    for (auto& x : input) x = rng.uniform();
    for (auto _ : state) {
        auto q = net.forward(input);
        benchmark::DoNotOptimize(q);
    }
}
BENCHMARK(BM_MlpForward);

static void BM_MlpBackward(benchmark::State& state) {
    Rng rng(13);
    Mlp net({19, 64, 64, 45}, rng);
    std::vector<double> input(19);
    for (auto& x : input) x = rng.uniform();
    MlpGrad grad = net.zero_grad();
    std::vector<double> grad_out(45, 0.0);
    grad_out[3] = 1.0;
    for (auto _ : state) {
        auto acts = net.forward_cached(input);
        net.backward(acts, grad_out, grad);
        benchmark::DoNotOptimize(grad);
    }
}
BENCHMARK(BM_MlpBackward);

static void BM_WorldTick(benchmark::State& state) {
    RoadNetwork road = build_road(LayoutId::MultiLaneCrossroad);
    EnvironmentConfig env;
    PerceptionModel model;
    std::optional<World> world;
    std::optional<EgoController> controller;
    world.emplace(road);
    controller.emplace(world->road());
    for (auto _ : state) {
        if (controller->destination_reached(world->ego())) {
            state.PauseTiming();
            world.emplace(road);
            controller.emplace(world->road());
            state.ResumeTiming();
        }
        auto perceived = sense(*world, env, model, 3);
        Control c = controller->plan(perceived, world->ego(), road.speed_limit);
        world->step(c, 0.1);
        // keep the sink scalar: DoNotOptimize on large structs miscompiles
        // with older google-benchmark releases
        benchmark::DoNotOptimize(world->ego().position.x);
    }
}
BENCHMARK(BM_WorldTick);

BENCHMARK_MAIN();
