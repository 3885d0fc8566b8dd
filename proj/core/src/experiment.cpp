#include "scengen/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace scengen {

using nlohmann::json;

const char* to_string(PolicyKind kind) {
    return kind == PolicyKind::Avastra ? "avastra" : "random";
}

PolicyKind policy_from_string(const std::string& name) {
    if (name == "avastra") return PolicyKind::Avastra;
    if (name == "random") return PolicyKind::Random;
    throw std::invalid_argument("unknown policy: " + name + " (expected avastra or random)");
}

void ExperimentConfig::validate() const {
    if (train_layouts.empty()) throw std::invalid_argument("no training layouts");
    if (eval_layouts.empty()) throw std::invalid_argument("no evaluation layouts");
    if (train_episodes <= 0) throw std::invalid_argument("train_episodes must be positive");
    if (eval_episodes <= 0) throw std::invalid_argument("eval_episodes must be positive");
    if (episode.otp_seconds <= 0.0) throw std::invalid_argument("otp_seconds must be positive");
    if (episode.dt <= 0.0) throw std::invalid_argument("dt must be positive");
    if (episode.max_actions <= 0) throw std::invalid_argument("max_actions must be positive");
    if (eval_epsilon < 0.0 || eval_epsilon > 1.0)
        throw std::invalid_argument("eval_epsilon outside [0, 1]");
}

namespace {

std::vector<LayoutId> layouts_from_json(const json& j) {
    std::vector<LayoutId> out;
    for (const auto& name : j) {
        auto id = layout_from_string(name.get<std::string>());
        if (!id) throw std::invalid_argument("unknown layout: " + name.get<std::string>());
        out.push_back(*id);
    }
    return out;
}

json layouts_to_json(const std::vector<LayoutId>& layouts) {
    json j = json::array();
    for (LayoutId id : layouts) j.push_back(to_string(id));
    return j;
}

}  // namespace

std::string ExperimentConfig::to_json() const {
    json j;
    j["train_layouts"] = layouts_to_json(train_layouts);
    j["eval_layouts"] = layouts_to_json(eval_layouts);
    j["train_episodes"] = train_episodes;
    j["eval_episodes"] = eval_episodes;
    j["seed"] = seed;
    j["policy"] = to_string(policy);
    j["eval_epsilon"] = eval_epsilon;
    j["eval_greedy"] = eval_greedy;
    j["max_actions"] = episode.max_actions;
    j["otp_seconds"] = episode.otp_seconds;
    j["dt"] = episode.dt;
    j["r_col"] = episode.r_col;
    j["ablation"] = to_string(episode.ablation);
    j["record_ticks"] = episode.record_ticks;
    j["spawn_speed_coeff"] = episode.weights.f_s_coeff;
    j["agent"] = {{"learning_rate", agent.learning_rate},
                  {"gamma", agent.gamma},
                  {"batch_size", agent.batch_size},
                  {"buffer_capacity", agent.buffer_capacity},
                  {"sync_period", agent.sync_period},
                  {"per_alpha", agent.alpha_per},
                  {"beta_start", agent.beta_start},
                  {"beta_end", agent.beta_end},
                  {"beta_anneal_steps", agent.beta_anneal_steps},
                  {"epsilon_start", agent.epsilon.start},
                  {"epsilon_end", agent.epsilon.end},
                  {"epsilon_decay_steps", agent.epsilon.decay_steps}};
    return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    json j = json::parse(text);
    ExperimentConfig c;
    if (j.contains("train_layouts")) c.train_layouts = layouts_from_json(j["train_layouts"]);
    if (j.contains("eval_layouts")) c.eval_layouts = layouts_from_json(j["eval_layouts"]);
    c.train_episodes = j.value("train_episodes", c.train_episodes);
    c.eval_episodes = j.value("eval_episodes", c.eval_episodes);
    c.seed = j.value("seed", c.seed);
    if (j.contains("policy")) c.policy = policy_from_string(j["policy"].get<std::string>());
    c.eval_epsilon = j.value("eval_epsilon", c.eval_epsilon);
    c.eval_greedy = j.value("eval_greedy", c.eval_greedy);
    c.episode.max_actions = j.value("max_actions", c.episode.max_actions);
    c.episode.otp_seconds = j.value("otp_seconds", c.episode.otp_seconds);
    c.episode.dt = j.value("dt", c.episode.dt);
    c.episode.r_col = j.value("r_col", c.episode.r_col);
    if (j.contains("ablation"))
        c.episode.ablation = ablation_from_string(j["ablation"].get<std::string>());
    c.episode.record_ticks = j.value("record_ticks", c.episode.record_ticks);
    c.episode.weights.f_s_coeff = j.value("spawn_speed_coeff", c.episode.weights.f_s_coeff);
    if (j.contains("agent")) {
        const json& a = j["agent"];
        c.agent.learning_rate = a.value("learning_rate", c.agent.learning_rate);
        c.agent.gamma = a.value("gamma", c.agent.gamma);
        c.agent.batch_size = a.value("batch_size", c.agent.batch_size);
        c.agent.buffer_capacity = a.value("buffer_capacity", c.agent.buffer_capacity);
        c.agent.sync_period = a.value("sync_period", c.agent.sync_period);
        c.agent.alpha_per = a.value("per_alpha", c.agent.alpha_per);
        c.agent.beta_start = a.value("beta_start", c.agent.beta_start);
        c.agent.beta_end = a.value("beta_end", c.agent.beta_end);
        c.agent.beta_anneal_steps = a.value("beta_anneal_steps", c.agent.beta_anneal_steps);
        c.agent.epsilon.start = a.value("epsilon_start", c.agent.epsilon.start);
        c.agent.epsilon.end = a.value("epsilon_end", c.agent.epsilon.end);
        c.agent.epsilon.decay_steps = a.value("epsilon_decay_steps", c.agent.epsilon.decay_steps);
    }
    c.validate();
    return c;
}

Policy make_random_policy() {
    return [](const std::vector<double>&, const std::vector<bool>& mask, Rng& rng) {
        std::vector<int> legal;
        for (int i = 0; i < int(mask.size()); ++i)
            if (mask[i]) legal.push_back(i);
        if (legal.empty()) throw std::logic_error("no legal action");
        return legal[rng.uniform_int(legal.size())];
    };
}

Policy make_agent_policy(const Mlp& net, double epsilon) {
    return [&net, epsilon](const std::vector<double>& s, const std::vector<bool>& mask, Rng& rng) {
        return select_action(net, s, epsilon, rng, mask);
    };
}

TrainingResult run_training(const ExperimentConfig& config) {
    config.validate();
    DdqnAgent agent(config.agent, hash_combine(config.seed, 0x7EA17ULL));
    Rng train_rng(hash_combine(config.seed, 0x7EA18ULL));

    std::vector<CurvePoint> curve;
    long env_steps = 0;
    int collisions = 0;

    for (int ep = 0; ep < config.train_episodes; ++ep) {
        EpisodeConfig ep_config = config.episode;
        ep_config.layout = config.train_layouts[ep % config.train_layouts.size()];
        std::uint64_t ep_seed = hash_combine(config.seed, 0x300000ULL + std::uint64_t(ep));

        double loss_sum = 0.0;
        int loss_count = 0;
        Policy policy = [&](const std::vector<double>& s, const std::vector<bool>& mask, Rng& rng) {
            return agent.act(s, agent.epsilon(env_steps), rng, mask);
        };
        TransitionSink sink = [&](const Transition& t) {
            agent.observe(t);
            ++env_steps;
            TrainResult tr = agent.train_step(train_rng);
            if (tr.trained) {
                loss_sum += tr.loss;
                ++loss_count;
            }
        };
        EpisodeTrace trace = run_episode(ep_config, ep_seed, policy, sink);
        if (trace.counted_collision()) ++collisions;

        CurvePoint pt;
        pt.episode = ep;
        pt.env_steps = env_steps;
        pt.epsilon = agent.epsilon(env_steps);
        pt.mean_loss = loss_count ? loss_sum / loss_count : 0.0;
        pt.episode_reward = trace.total_reward;
        pt.collided = trace.counted_collision();
        curve.push_back(pt);
    }
    return TrainingResult{std::move(agent), std::move(curve), collisions};
}

std::string curve_to_csv(const std::vector<CurvePoint>& curve) {
    std::ostringstream out;
    out << "episode,env_steps,epsilon,mean_loss,episode_reward,collided\n";
    for (const auto& pt : curve)
        out << pt.episode << "," << pt.env_steps << "," << pt.epsilon << "," << pt.mean_loss << ","
            << pt.episode_reward << "," << (pt.collided ? 1 : 0) << "\n";
    return out.str();
}

EvaluationResult run_evaluation(const ExperimentConfig& config, PolicyKind policy, const Mlp* net,
                                bool keep_traces) {
    config.validate();
    if (policy == PolicyKind::Avastra && !net)
        throw std::invalid_argument("avastra evaluation needs a trained network");

    double eps = config.eval_greedy ? 0.0 : config.eval_epsilon;
    Policy pol = policy == PolicyKind::Random ? make_random_policy() : make_agent_policy(*net, eps);

    EvaluationResult result;
    result.report.policy = to_string(policy);
    result.report.ablation = to_string(config.episode.ablation);

    double ttc_sum = 0.0;
    int ttc_count = 0;
    for (std::size_t li = 0; li < config.eval_layouts.size(); ++li) {
        EpisodeConfig ep_config = config.episode;
        ep_config.layout = config.eval_layouts[li];
        RoadMetrics road;
        road.layout = ep_config.layout;
        double road_ttc_sum = 0.0;
        int road_ttc_count = 0;
        for (int i = 0; i < config.eval_episodes; ++i) {
            // Seeds depend only on (experiment seed, layout, index) so rival
            // policies face identical scenario randomness.
            std::uint64_t ep_seed =
                hash_combine(hash_combine(config.seed, 0xE7A1ULL + li), std::uint64_t(i));
            EpisodeTrace trace = run_episode(ep_config, ep_seed, pol);
            ++road.episodes;
            ++result.report.episodes;
            if (trace.cause == TerminalCause::UnavoidableCollisionExcluded)
                ++result.report.excluded_unavoidable;
            if (trace.counted_collision()) {
                ++road.collisions;
                ++result.report.collisions;
                double ttc = trace.time_to_collision.value();
                ttc_sum += ttc;
                ++ttc_count;
                road_ttc_sum += ttc;
                ++road_ttc_count;
            }
            if (keep_traces) result.traces.push_back(std::move(trace));
        }
        if (road_ttc_count) road.mean_ttc = road_ttc_sum / road_ttc_count;
        result.report.per_road.push_back(road);
    }
    if (ttc_count) result.report.mean_ttc = ttc_sum / ttc_count;
    return result;
}

std::string MetricsReport::to_json() const {
    json j;
    j["policy"] = policy;
    j["ablation"] = ablation;
    j["episodes"] = episodes;
    j["collisions"] = collisions;
    j["excluded_unavoidable"] = excluded_unavoidable;
    if (mean_ttc) j["mean_ttc"] = *mean_ttc;
    json roads = json::array();
    for (const auto& r : per_road) {
        json row;
        row["road"] = to_string(r.layout);
        row["episodes"] = r.episodes;
        row["collisions"] = r.collisions;
        if (r.mean_ttc) row["mean_ttc"] = *r.mean_ttc;
        roads.push_back(std::move(row));
    }
    j["per_road"] = std::move(roads);
    return j.dump(2);
}

MetricsReport MetricsReport::from_json(const std::string& text) {
    json j = json::parse(text);
    MetricsReport r;
    r.policy = j.at("policy").get<std::string>();
    r.ablation = j.value("ablation", std::string("full"));
    r.episodes = j.at("episodes").get<int>();
    r.collisions = j.at("collisions").get<int>();
    r.excluded_unavoidable = j.value("excluded_unavoidable", 0);
    if (j.contains("mean_ttc")) r.mean_ttc = j["mean_ttc"].get<double>();
    for (const auto& row : j.at("per_road")) {
        RoadMetrics m;
        auto id = layout_from_string(row.at("road").get<std::string>());
        if (!id) throw std::invalid_argument("unknown road in report: " +
                                             row.at("road").get<std::string>());
        m.layout = *id;
        m.episodes = row.at("episodes").get<int>();
        m.collisions = row.at("collisions").get<int>();
        if (row.contains("mean_ttc")) m.mean_ttc = row["mean_ttc"].get<double>();
        r.per_road.push_back(m);
    }
    return r;
}

ComparisonTable compare(const std::vector<MetricsReport>& reports) {
    if (reports.size() < 2)
        throw std::invalid_argument("compare needs at least two reports");
    std::vector<LayoutId> roads;
    for (const auto& r : reports.front().per_road) roads.push_back(r.layout);
    for (const auto& rep : reports) {
        std::vector<LayoutId> other;
        for (const auto& r : rep.per_road) other.push_back(r.layout);
        if (other != roads) throw std::invalid_argument("reports cover different road sets");
    }

    ComparisonTable table;
    for (const auto& rep : reports) table.policies.push_back(rep.policy);
    const MetricsReport& baseline = reports.back();
    table.baseline = baseline.policy;

    auto ratio = [](int a, int b) { return b > 0 ? double(a) / double(b) : 0.0; };
    for (std::size_t ri = 0; ri < roads.size(); ++ri) {
        for (const auto& rep : reports) {
            const RoadMetrics& m = rep.per_road[ri];
            ComparisonRow row;
            row.road = to_string(m.layout);
            row.policy = rep.policy;
            row.episodes = m.episodes;
            row.collisions = m.collisions;
            row.mean_ttc = m.mean_ttc;
            row.collision_ratio_vs_baseline =
                ratio(m.collisions, baseline.per_road[ri].collisions);
            table.rows.push_back(std::move(row));
        }
    }
    for (const auto& rep : reports) {
        ComparisonRow row;
        row.road = "total";
        row.policy = rep.policy;
        row.episodes = rep.episodes;
        row.collisions = rep.collisions;
        row.mean_ttc = rep.mean_ttc;
        row.collision_ratio_vs_baseline = ratio(rep.collisions, baseline.collisions);
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string ComparisonTable::to_csv() const {
    std::ostringstream out;
    out << "road,policy,episodes,collisions,mean_ttc,collision_ratio_vs_" << baseline << "\n";
    for (const auto& row : rows) {
        out << row.road << "," << row.policy << "," << row.episodes << "," << row.collisions << ",";
        if (row.mean_ttc) out << *row.mean_ttc;
        out << "," << row.collision_ratio_vs_baseline << "\n";
    }
    return out.str();
}

std::string ComparisonTable::to_json() const {
    json j;
    j["policies"] = policies;
    j["baseline"] = baseline;
    json out_rows = json::array();
    for (const auto& row : rows) {
        json r;
        r["road"] = row.road;
        r["policy"] = row.policy;
        r["episodes"] = row.episodes;
        r["collisions"] = row.collisions;
        if (row.mean_ttc) r["mean_ttc"] = *row.mean_ttc;
        r["collision_ratio_vs_baseline"] = row.collision_ratio_vs_baseline;
        out_rows.push_back(std::move(r));
    }
    j["rows"] = std::move(out_rows);
    return j.dump(2);
}

double two_proportion_p_value(int c1, int n1, int c2, int n2) {
    if (n1 <= 0 || n2 <= 0) throw std::invalid_argument("empty sample in proportion test");
    double p1 = double(c1) / n1;
    double p2 = double(c2) / n2;
    double pooled = double(c1 + c2) / double(n1 + n2);
    double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2));
    if (se == 0.0) return p1 > p2 ? 0.0 : 1.0;
    double z = (p1 - p2) / se;
    // One-sided upper-tail p-value of the standard normal.
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

}  // namespace scengen
