#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "scengen/experiment.hpp"
#include "scengen/state_encoding.hpp"

using namespace scengen;

namespace {
EpisodeConfig quick_episode(LayoutId layout = LayoutId::LShapedJunction) {
    EpisodeConfig cfg;
    cfg.layout = layout;
    return cfg;
}
}  // namespace

TEST_CASE("never spawning in clear weather reaches the destination") {
    Policy noop = [](const std::vector<double>&, const std::vector<bool>&, Rng&) { return 0; };
    EpisodeTrace t = run_episode(quick_episode(), 9, noop);
    CHECK(t.cause == TerminalCause::DestinationReached);
    CHECK(t.counted_collision() == false);
    CHECK_FALSE(t.time_to_collision.has_value());
}

TEST_CASE("episodes are bitwise deterministic per seed") {
    Policy random_policy = make_random_policy();
    EpisodeConfig cfg = quick_episode(LayoutId::CornerIntersection);
    EpisodeTrace a = run_episode(cfg, 321, random_policy);
    EpisodeTrace b = run_episode(cfg, 321, random_policy);
    CHECK(trace_to_jsonl(a) == trace_to_jsonl(b));
    EpisodeTrace c = run_episode(cfg, 322, random_policy);
    CHECK(trace_to_jsonl(a) != trace_to_jsonl(c));
}

TEST_CASE("an injected unavoidable collision is excluded, not counted") {
    EpisodeConfig cfg = quick_episode();
    cfg.inject_unavoidable_at = 0;
    Policy noop = [](const std::vector<double>&, const std::vector<bool>&, Rng&) { return 0; };
    EpisodeTrace t = run_episode(cfg, 55, noop);
    CHECK(t.cause == TerminalCause::UnavoidableCollisionExcluded);
    CHECK_FALSE(t.counted_collision());
    // the forced spawn is flagged in the audit trail
    bool saw_forced = false;
    for (const auto& step : t.steps)
        for (const auto& audit : step.spawn_audits)
            if (audit.forced && audit.required_decel > 6.0) saw_forced = true;
    CHECK(saw_forced);
    // exclusion also keeps the step reward below the collision bonus
    CHECK(t.steps.back().reward < cfg.r_col);
}

TEST_CASE("trace jsonl round-trips") {
    EpisodeTrace t = run_episode(quick_episode(), 77, make_random_policy());
    std::string text = trace_to_jsonl(t);
    EpisodeTrace back = trace_from_jsonl(text);
    CHECK(trace_to_jsonl(back) == text);
    CHECK(back.steps.size() == t.steps.size());
    CHECK(back.cause == t.cause);
}

TEST_CASE("truncated traces fail with a line number") {
    EpisodeTrace t = run_episode(quick_episode(), 77, make_random_policy());
    std::string text = trace_to_jsonl(t);
    std::string truncated = text.substr(0, text.rfind('{') - 1);  // drop the terminal line
    CHECK_THROWS_AS(trace_from_jsonl(truncated), TraceFormatError);
    try {
        trace_from_jsonl(truncated);
    } catch (const TraceFormatError& e) {
        CHECK(e.line() >= 1);
    }
    CHECK_THROWS_AS(trace_from_jsonl("not json\n"), TraceFormatError);
}

TEST_CASE("replaying an untouched trace is identical") {
    EpisodeConfig cfg = quick_episode(LayoutId::MultiLaneCrossroad);
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        EpisodeTrace t = run_episode(cfg, seed, make_random_policy());
        ReplayReport rep = replay_trace(t, cfg);
        CHECK(rep.identical);
        CHECK(rep.message == "identical");
    }
}

TEST_CASE("replay detects a tampered action") {
    EpisodeConfig cfg = quick_episode();
    EpisodeTrace t = run_episode(cfg, 5, make_random_policy());
    REQUIRE(t.steps.size() >= 2);
    t.steps[1].action = (t.steps[1].action + 1) % 12;  // swap in a different weather action
    ReplayReport rep = replay_trace(t, cfg);
    CHECK_FALSE(rep.identical);
    REQUIRE(rep.divergent_step.has_value());
    CHECK(*rep.divergent_step <= 1);
}

TEST_CASE("reward recorded in traces matches the shaping function") {
    EpisodeTrace t = run_episode(quick_episode(LayoutId::CornerIntersection), 31,
                                 make_random_policy());
    for (const auto& step : t.steps)
        CHECK(step.reward == doctest::Approx(reward(step.proc, 2.0)).epsilon(1e-12));
}

TEST_CASE("time-to-collision is a positive tick multiple inside the episode") {
    // hunt for a seed that produces a counted collision under random actions
    EpisodeConfig cfg = quick_episode();
    bool found = false;
    for (std::uint64_t seed = 0; seed < 300 && !found; ++seed) {
        EpisodeTrace t = run_episode(cfg, seed, make_random_policy());
        if (!t.counted_collision()) continue;
        found = true;
        REQUIRE(t.time_to_collision.has_value());
        double ttc = *t.time_to_collision;
        CHECK(ttc > 0.0);
        double ticks = ttc / cfg.dt;
        CHECK(ticks == doctest::Approx(std::round(ticks)).epsilon(1e-9));
        CHECK(t.collision_actor.has_value());
        CHECK(t.steps.back().reward == doctest::Approx(cfg.r_col));
    }
    CHECK(found);
}

TEST_CASE("action mask blocks spawns at the participant caps") {
    ActionCaps caps;
    EnvironmentConfig env;
    auto mask = action_mask(env, caps);
    REQUIRE(int(mask.size()) == kActionCount);
    for (bool m : mask) CHECK(m);  // empty roster: everything legal
    env.npcs.resize(caps.max_npcs);
    mask = action_mask(env, caps);
    for (int i = 13; i <= 42; ++i) CHECK_FALSE(mask[i]);
    CHECK(mask[0]);
    CHECK(mask[12]);
    CHECK(mask[43]);
    env.pedestrians.resize(caps.max_pedestrians);
    mask = action_mask(env, caps);
    CHECK_FALSE(mask[43]);
    CHECK_FALSE(mask[44]);
}

TEST_CASE("experiment config validation and json round-trip") {
    ExperimentConfig cfg;
    cfg.train_episodes = 3;
    cfg.eval_episodes = 4;
    cfg.seed = 99;
    cfg.policy = PolicyKind::Random;
    cfg.episode.ablation = AblationMode::ExternalOnly;
    cfg.eval_layouts = {LayoutId::CurvedBoulevard, LayoutId::CornerIntersection};
    ExperimentConfig back = ExperimentConfig::from_json(cfg.to_json());
    CHECK(back.to_json() == cfg.to_json());
    CHECK(back.seed == 99);
    CHECK(back.policy == PolicyKind::Random);
    CHECK(back.episode.ablation == AblationMode::ExternalOnly);
    CHECK(back.eval_layouts == cfg.eval_layouts);

    ExperimentConfig bad = cfg;
    bad.eval_episodes = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.eval_epsilon = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.episode.dt = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("evaluation produces per-road metrics and round-trippable reports") {
    ExperimentConfig cfg;
    cfg.eval_episodes = 5;
    cfg.eval_layouts = {LayoutId::LShapedJunction, LayoutId::CornerIntersection};
    cfg.episode.record_ticks = false;
    EvaluationResult res = run_evaluation(cfg, PolicyKind::Random);
    CHECK(res.report.episodes == 10);
    REQUIRE(res.report.per_road.size() == 2);
    CHECK(res.report.per_road[0].episodes == 5);
    CHECK(res.report.policy == "random");
    MetricsReport back = MetricsReport::from_json(res.report.to_json());
    CHECK(back.to_json() == res.report.to_json());

    // the trained policy requires a network
    CHECK_THROWS(run_evaluation(cfg, PolicyKind::Avastra, nullptr));
}

TEST_CASE("rival policies see identical scenario seeds") {
    ExperimentConfig cfg;
    cfg.eval_episodes = 4;
    cfg.episode.record_ticks = false;
    EvaluationResult a = run_evaluation(cfg, PolicyKind::Random, nullptr, true);
    Rng init(1);
    Mlp net({kStateSize, 8, kActionCount}, init);
    EvaluationResult b = run_evaluation(cfg, PolicyKind::Avastra, &net, true);
    REQUIRE(a.traces.size() == b.traces.size());
    for (std::size_t i = 0; i < a.traces.size(); ++i) CHECK(a.traces[i].seed == b.traces[i].seed);
}

TEST_CASE("comparison table aligns roads against the last report") {
    MetricsReport agent, random;
    agent.policy = "avastra";
    random.policy = "random";
    for (auto* r : {&agent, &random}) {
        r->episodes = 100;
        r->per_road = {{LayoutId::LShapedJunction, 100, 0, std::nullopt}};
    }
    agent.collisions = 30;
    agent.per_road[0].collisions = 30;
    random.collisions = 10;
    random.per_road[0].collisions = 10;
    ComparisonTable table = compare({agent, random});
    CHECK(table.baseline == "random");
    bool saw_total = false;
    for (const auto& row : table.rows) {
        if (row.road == "total" && row.policy == "avastra") {
            saw_total = true;
            CHECK(row.collision_ratio_vs_baseline == doctest::Approx(3.0));
        }
    }
    CHECK(saw_total);
    CHECK(table.to_csv().find("collision_ratio_vs_random") != std::string::npos);

    CHECK_THROWS_AS(compare({agent}), std::invalid_argument);
    MetricsReport mismatched = random;
    mismatched.per_road[0].layout = LayoutId::CurvedBoulevard;
    CHECK_THROWS_AS(compare({agent, mismatched}), std::invalid_argument);
}

TEST_CASE("two-proportion test sanity") {
    // 20/100 vs 10/100, one-sided: z ~ 1.98, p ~ 0.0238
    CHECK(two_proportion_p_value(20, 100, 10, 100) == doctest::Approx(0.0238).epsilon(0.05));
    CHECK(two_proportion_p_value(10, 100, 10, 100) == doctest::Approx(0.5));
    CHECK(two_proportion_p_value(5, 100, 20, 100) > 0.5);  // wrong direction
    CHECK(two_proportion_p_value(90, 100, 10, 100) < 1e-6);
}

TEST_CASE("training curve csv has one row per episode") {
    ExperimentConfig cfg;
    cfg.train_episodes = 3;
    cfg.episode.record_ticks = false;
    cfg.agent.batch_size = 8;
    TrainingResult res = run_training(cfg);
    CHECK(int(res.curve.size()) == 3);
    std::string csv = curve_to_csv(res.curve);
    std::istringstream in(csv);
    std::string line;
    int rows = 0;
    std::getline(in, line);
    CHECK(line == "episode,env_steps,epsilon,mean_loss,episode_reward,collided");
    while (std::getline(in, line))
        if (!line.empty()) rows++;
    CHECK(rows == 3);
    // env steps accumulate across episodes
    CHECK(res.curve[2].env_steps > res.curve[0].env_steps);
}
