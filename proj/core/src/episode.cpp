#include "scengen/episode.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace scengen {

using nlohmann::json;

const char* to_string(TerminalCause cause) {
    switch (cause) {
        case TerminalCause::Collision: return "collision";
        case TerminalCause::UnavoidableCollisionExcluded: return "unavoidable_collision_excluded";
        case TerminalCause::DestinationReached: return "destination_reached";
        case TerminalCause::ActionBudgetExhausted: return "action_budget_exhausted";
    }
    return "action_budget_exhausted";
}

TerminalCause terminal_cause_from_string(const std::string& name) {
    if (name == "collision") return TerminalCause::Collision;
    if (name == "unavoidable_collision_excluded") return TerminalCause::UnavoidableCollisionExcluded;
    if (name == "destination_reached") return TerminalCause::DestinationReached;
    if (name == "action_budget_exhausted") return TerminalCause::ActionBudgetExhausted;
    throw std::invalid_argument("unknown terminal cause: " + name);
}

std::vector<bool> action_mask(const EnvironmentConfig& env, const ActionCaps& caps) {
    std::vector<bool> mask(kActionCount, true);
    bool npc_full = int(env.npcs.size()) >= caps.max_npcs;
    bool ped_full = int(env.pedestrians.size()) >= caps.max_pedestrians;
    for (const Action& a : enumerate_actions()) {
        if (a.kind == Action::Kind::SpawnNpc && npc_full) mask[a.index] = false;
        if (a.kind == Action::Kind::SpawnPedestrian && ped_full) mask[a.index] = false;
    }
    return mask;
}

namespace {

struct EncodeResult {
    std::vector<double> state;
    std::optional<double> nearest_cd;
};

EncodeResult encode_now(const World& world, const EnvironmentConfig& env,
                        const InternalState& internal, const EpisodeConfig& config,
                        std::uint64_t perception_seed) {
    auto perceived = sense(world, env, config.perception, perception_seed);
    std::optional<double> nearest;
    for (const auto& ob : perceived) {
        double d = current_distance(world.ego().position, ob.state.position);
        if (!nearest || d < *nearest) nearest = d;
    }
    double losd_v = losd(world.ego().speed, 0.0, config.safety);
    auto s = encode_state(env, internal, nearest, losd_v, config.caps);
    return {apply_ablation(std::move(s), config.ablation), nearest};
}

const SpawnedActor* find_actor(const World& world, int id) {
    for (const auto& a : world.actors())
        if (a.id == id) return &a;
    return nullptr;
}

}  // namespace

EpisodeTrace run_episode(const EpisodeConfig& config, std::uint64_t seed, const Policy& policy,
                         const TransitionSink& sink) {
    RoadNetwork road = build_road(config.layout);
    World world(road, config.kin);
    EgoController controller(world.road(), config.controller, config.safety);

    EnvironmentConfig env;
    EpisodeTrace trace;
    trace.seed = seed;
    trace.layout = config.layout;
    trace.ablation = config.ablation;

    Rng policy_rng(hash_combine(seed, 0xA11CEULL));
    std::uint64_t perception_seed = hash_combine(seed, 0x5E45EULL);
    int ticks_per_step = int(std::lround(config.otp_seconds / config.dt));
    InternalState internal{};
    internal.speed = world.ego().speed;

    for (int step = 0; step < config.max_actions; ++step) {
        EncodeResult enc = encode_now(world, env, internal, config, perception_seed);
        std::vector<bool> mask = action_mask(env, config.caps);
        int a = policy(enc.state, mask, policy_rng);
        if (a < 0 || a >= kActionCount || !mask[a])
            throw std::logic_error("policy returned an illegal action");

        Rng step_rng(hash_combine(seed, 0x100 + std::uint64_t(step)));
        ApplyResult applied = apply_action(env, enumerate_actions()[a], world, step_rng,
                                           config.caps, config.weights, config.safety,
                                           config.spawn_horizon_s);
        env = applied.env;

        StepRecord rec;
        rec.step = step;
        rec.action = a;
        rec.env = env;
        rec.state = enc.state;
        rec.spawn_rejected = applied.spawn_rejected;
        rec.reject_reason = applied.reject_reason;
        rec.spawned_ids = applied.spawned_ids;
        if (step == config.inject_unavoidable_at)
            rec.spawned_ids.push_back(spawn_unavoidable_fixture(world, config.kin));
        for (int id : rec.spawned_ids) {
            const SpawnedActor* actor = find_actor(world, id);
            if (actor)
                rec.spawn_audits.push_back({id, actor->spawn_required_decel,
                                            actor->spawn_distance_to_ego, actor->spawn_ego_speed,
                                            actor->forced});
        }

        double window_proc = 0.0;
        bool collided = false;
        bool excluded = false;
        int collision_actor = -1;
        bool dest = false;
        double brake_scale = PerceptionModel::brake_multiplier(env.wetness);
        double range_frac =
            config.perception.effective_range(env) / config.perception.base_sensor_range;

        for (int t = 0; t < ticks_per_step; ++t) {
            auto perceived = sense(world, env, config.perception, perception_seed);
            Control c = controller.plan(perceived, world.ego(), road.speed_limit);
            world.step(c, config.dt, brake_scale);
            internal = controller.internal_state(world.ego(), range_frac, 0.0);

            auto hit = world.ego_collision();
            if (hit) {
                collided = true;
                collision_actor = *hit;
                const SpawnedActor* actor = find_actor(world, collision_actor);
                excluded = actor && actor->spawn_required_decel > config.kin.b_max + 1e-9;
            }
            auto pb = collision_probability(world.ego(), world.obstacles(), road, config.safety,
                                            collided && !excluded);
            window_proc = std::max(window_proc, pb.proc);

            if (config.record_ticks) {
                TickRecord tr;
                tr.tick = world.tick();
                tr.ego_x = world.ego().position.x;
                tr.ego_y = world.ego().position.y;
                tr.ego_heading = world.ego().heading;
                tr.ego_speed = world.ego().speed;
                tr.proc = pb.proc;
                for (const auto& actor : world.actors())
                    tr.actors.push_back({double(actor.id), actor.state.position.x,
                                         actor.state.position.y, actor.state.speed});
                rec.ticks.push_back(std::move(tr));
            }
            if (collided) break;
            if (controller.destination_reached(world.ego())) {
                dest = true;
                break;
            }
        }

        // An excluded collision never yields the collision reward; its window
        // max is capped strictly below the forced value.
        rec.proc = (collided && !excluded) ? 1.0 : std::min(window_proc, 1.0 - 1e-12);
        rec.reward = reward(rec.proc, config.r_col);
        trace.total_reward += rec.reward;

        bool done = collided || dest || step + 1 == config.max_actions;
        if (sink) {
            EncodeResult next = encode_now(world, env, internal, config, perception_seed);
            sink(Transition{enc.state, a, rec.reward, next.state, done});
        }
        trace.steps.push_back(std::move(rec));

        if (collided) {
            trace.cause = excluded ? TerminalCause::UnavoidableCollisionExcluded
                                   : TerminalCause::Collision;
            trace.time_to_collision = world.tick() * config.dt;
            trace.collision_actor = collision_actor;
            return trace;
        }
        if (dest) {
            trace.cause = TerminalCause::DestinationReached;
            return trace;
        }
    }
    trace.cause = TerminalCause::ActionBudgetExhausted;
    return trace;
}

int spawn_unavoidable_fixture(World& world, const KinematicsParams& kin) {
    const ActorState& ego = world.ego();
    Vec2 fwd = from_heading(ego.heading);
    SpawnedActor actor;
    actor.state.kind = ActorKind::NpcLarge;
    Footprint fp = footprint_for(ActorKind::NpcLarge);
    actor.state.half_length = fp.half_length;
    actor.state.half_width = fp.half_width;
    double gap = 8.0;
    actor.state.position = {ego.position.x + fwd.x * gap, ego.position.y + fwd.y * gap};
    actor.state.heading = wrap_angle(ego.heading + M_PI);
    actor.state.speed = 20.0;
    actor.state.lane_id = world.road().member_lane(actor.state.position, fp.half_width);
    actor.command_speed = actor.state.speed;
    actor.set_path({actor.state.position,
                    {actor.state.position.x - fwd.x * 200.0, actor.state.position.y - fwd.y * 200.0}});
    actor.forced = true;
    actor.spawn_ego_speed = ego.speed;
    actor.spawn_distance_to_ego = gap;
    // Head-on closing inside the footprint gap: stopping demands far more
    // than any bounded deceleration can deliver.
    double closing = ego.speed + actor.state.speed;
    double free_gap = std::max(gap - ego.half_length - fp.half_length, 0.1);
    actor.spawn_required_decel = closing * closing / (2.0 * free_gap);
    if (actor.spawn_required_decel <= kin.b_max)
        actor.spawn_required_decel = kin.b_max * 10.0;
    return world.add_actor(std::move(actor));
}

namespace {

json env_to_json(const EnvironmentConfig& env) {
    json j;
    j["rain"] = int(env.rain);
    j["fog"] = int(env.fog);
    j["wetness"] = int(env.wetness);
    j["time_of_day"] = int(env.time_of_day);
    json npcs = json::array();
    for (const auto& n : env.npcs)
        npcs.push_back({{"behavior", int(n.behavior)},
                        {"lane_rel", int(n.lane_rel)},
                        {"dist_mode", int(n.dist_mode)},
                        {"size", int(n.size)},
                        {"type", int(n.vehicle_type)},
                        {"color", int(n.color)},
                        {"speed", n.speed}});
    j["npcs"] = std::move(npcs);
    json peds = json::array();
    for (const auto& p : env.pedestrians)
        peds.push_back({{"direction", int(p.crossing_direction)},
                        {"speed", p.speed},
                        {"ahead", p.spawn_distance_ahead}});
    j["pedestrians"] = std::move(peds);
    return j;
}

EnvironmentConfig env_from_json(const json& j) {
    EnvironmentConfig env;
    env.rain = WeatherLevel(j.at("rain").get<int>());
    env.fog = WeatherLevel(j.at("fog").get<int>());
    env.wetness = WeatherLevel(j.at("wetness").get<int>());
    env.time_of_day = TimeOfDay(j.at("time_of_day").get<int>());
    for (const auto& n : j.at("npcs")) {
        NpcSpec spec;
        spec.behavior = NpcBehavior(n.at("behavior").get<int>());
        spec.lane_rel = LaneRel(n.at("lane_rel").get<int>());
        spec.dist_mode = DistMode(n.at("dist_mode").get<int>());
        spec.size = VehicleSize(n.at("size").get<int>());
        spec.vehicle_type = VehicleType(n.at("type").get<int>());
        spec.color = VehicleColor(n.at("color").get<int>());
        spec.speed = n.at("speed").get<double>();
        env.npcs.push_back(spec);
    }
    for (const auto& p : j.at("pedestrians")) {
        PedestrianSpec spec;
        spec.crossing_direction = CrossingDirection(p.at("direction").get<int>());
        spec.speed = p.at("speed").get<double>();
        spec.spawn_distance_ahead = p.at("ahead").get<double>();
        env.pedestrians.push_back(spec);
    }
    return env;
}

json step_to_json(const StepRecord& rec) {
    json j;
    j["type"] = "step";
    j["step"] = rec.step;
    j["action"] = rec.action;
    j["env"] = env_to_json(rec.env);
    j["state"] = rec.state;
    j["proc"] = rec.proc;
    j["reward"] = rec.reward;
    j["spawn_rejected"] = rec.spawn_rejected;
    j["reject_reason"] = rec.reject_reason;
    j["spawned_ids"] = rec.spawned_ids;
    json audits = json::array();
    for (const auto& a : rec.spawn_audits)
        audits.push_back({{"id", a.id},
                          {"required_decel", a.required_decel},
                          {"distance_to_ego", a.distance_to_ego},
                          {"ego_speed", a.ego_speed},
                          {"forced", a.forced}});
    j["spawn_audits"] = std::move(audits);
    json ticks = json::array();
    for (const auto& t : rec.ticks) {
        json actors = json::array();
        for (const auto& a : t.actors) actors.push_back({int(a[0]), a[1], a[2], a[3]});
        ticks.push_back({{"tick", t.tick},
                         {"ego", {t.ego_x, t.ego_y, t.ego_heading, t.ego_speed}},
                         {"proc", t.proc},
                         {"actors", std::move(actors)}});
    }
    j["ticks"] = std::move(ticks);
    return j;
}

StepRecord step_from_json(const json& j) {
    StepRecord rec;
    rec.step = j.at("step").get<int>();
    rec.action = j.at("action").get<int>();
    rec.env = env_from_json(j.at("env"));
    rec.state = j.at("state").get<std::vector<double>>();
    rec.proc = j.at("proc").get<double>();
    rec.reward = j.at("reward").get<double>();
    rec.spawn_rejected = j.at("spawn_rejected").get<bool>();
    rec.reject_reason = j.at("reject_reason").get<std::string>();
    rec.spawned_ids = j.at("spawned_ids").get<std::vector<int>>();
    for (const auto& a : j.at("spawn_audits"))
        rec.spawn_audits.push_back({a.at("id").get<int>(), a.at("required_decel").get<double>(),
                                    a.at("distance_to_ego").get<double>(),
                                    a.at("ego_speed").get<double>(), a.at("forced").get<bool>()});
    for (const auto& t : j.at("ticks")) {
        TickRecord tr;
        tr.tick = t.at("tick").get<int>();
        const auto& e = t.at("ego");
        tr.ego_x = e.at(0).get<double>();
        tr.ego_y = e.at(1).get<double>();
        tr.ego_heading = e.at(2).get<double>();
        tr.ego_speed = e.at(3).get<double>();
        tr.proc = t.at("proc").get<double>();
        for (const auto& a : t.at("actors"))
            tr.actors.push_back({double(a.at(0).get<int>()), a.at(1).get<double>(),
                                 a.at(2).get<double>(), a.at(3).get<double>()});
        rec.ticks.push_back(std::move(tr));
    }
    return rec;
}

}  // namespace

void write_trace_jsonl(const EpisodeTrace& trace, std::ostream& out) {
    json header;
    header["type"] = "header";
    header["seed"] = trace.seed;
    header["layout"] = to_string(trace.layout);
    header["ablation"] = to_string(trace.ablation);
    out << header.dump() << "\n";
    for (const auto& rec : trace.steps) out << step_to_json(rec).dump() << "\n";
    json terminal;
    terminal["type"] = "terminal";
    terminal["cause"] = to_string(trace.cause);
    terminal["total_reward"] = trace.total_reward;
    if (trace.time_to_collision) terminal["time_to_collision"] = *trace.time_to_collision;
    if (trace.collision_actor) terminal["collision_actor"] = *trace.collision_actor;
    out << terminal.dump() << "\n";
}

std::string trace_to_jsonl(const EpisodeTrace& trace) {
    std::ostringstream out;
    write_trace_jsonl(trace, out);
    return out.str();
}

EpisodeTrace read_trace_jsonl(std::istream& in) {
    EpisodeTrace trace;
    std::string line;
    int line_no = 0;
    bool have_header = false;
    bool have_terminal = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw TraceFormatError(line_no, e.what());
        }
        try {
            std::string type = j.at("type").get<std::string>();
            if (type == "header") {
                if (have_header) throw std::runtime_error("duplicate header");
                have_header = true;
                trace.seed = j.at("seed").get<std::uint64_t>();
                auto layout = layout_from_string(j.at("layout").get<std::string>());
                if (!layout) throw std::runtime_error("unknown layout name");
                trace.layout = *layout;
                trace.ablation = ablation_from_string(j.at("ablation").get<std::string>());
            } else if (type == "step") {
                if (!have_header) throw std::runtime_error("step before header");
                trace.steps.push_back(step_from_json(j));
            } else if (type == "terminal") {
                if (!have_header) throw std::runtime_error("terminal before header");
                have_terminal = true;
                trace.cause = terminal_cause_from_string(j.at("cause").get<std::string>());
                trace.total_reward = j.at("total_reward").get<double>();
                if (j.contains("time_to_collision"))
                    trace.time_to_collision = j.at("time_to_collision").get<double>();
                if (j.contains("collision_actor"))
                    trace.collision_actor = j.at("collision_actor").get<int>();
            } else {
                throw std::runtime_error("unknown record type: " + type);
            }
        } catch (const TraceFormatError&) {
            throw;
        } catch (const std::exception& e) {
            throw TraceFormatError(line_no, e.what());
        }
    }
    if (!have_header) throw TraceFormatError(line_no == 0 ? 1 : line_no, "missing header record");
    if (!have_terminal) throw TraceFormatError(line_no, "missing terminal record");
    return trace;
}

EpisodeTrace trace_from_jsonl(const std::string& text) {
    std::istringstream in(text);
    return read_trace_jsonl(in);
}

ReplayReport replay_trace(const EpisodeTrace& recorded, const EpisodeConfig& config) {
    std::vector<int> actions;
    for (const auto& rec : recorded.steps) actions.push_back(rec.action);
    std::size_t cursor = 0;
    Policy scripted = [&](const std::vector<double>&, const std::vector<bool>&, Rng&) {
        if (cursor >= actions.size()) throw std::logic_error("replay ran past the recorded steps");
        return actions[cursor++];
    };
    EpisodeConfig replay_config = config;
    replay_config.layout = recorded.layout;
    replay_config.ablation = recorded.ablation;
    EpisodeTrace regenerated = run_episode(replay_config, recorded.seed, scripted);

    ReplayReport report;
    std::size_t n = std::min(recorded.steps.size(), regenerated.steps.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (step_to_json(recorded.steps[i]).dump() != step_to_json(regenerated.steps[i]).dump()) {
            report.divergent_step = int(i);
            report.message = "divergence at step " + std::to_string(i);
            return report;
        }
    }
    if (recorded.steps.size() != regenerated.steps.size()) {
        report.divergent_step = int(n);
        report.message = "step count differs: recorded " + std::to_string(recorded.steps.size()) +
                         ", regenerated " + std::to_string(regenerated.steps.size());
        return report;
    }
    if (recorded.cause != regenerated.cause) {
        report.message = std::string("terminal cause differs: recorded ") +
                         to_string(recorded.cause) + ", regenerated " +
                         to_string(regenerated.cause);
        return report;
    }
    report.identical = true;
    report.message = "identical";
    return report;
}

}  // namespace scengen
