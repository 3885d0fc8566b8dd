#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scengen/agent.hpp"
#include "scengen/episode.hpp"

namespace scengen {

enum class PolicyKind { Avastra, Random };

const char* to_string(PolicyKind kind);
PolicyKind policy_from_string(const std::string& name);

/// Full experiment description, loadable from JSON. A fixed seed determines
/// every reported number.
struct ExperimentConfig {
    std::vector<LayoutId> train_layouts{LayoutId::LShapedJunction};
    std::vector<LayoutId> eval_layouts{LayoutId::LShapedJunction};
    int train_episodes{200};
    int eval_episodes{100};
    std::uint64_t seed{1};
    PolicyKind policy{PolicyKind::Avastra};
    double eval_epsilon{0.1};  // exploitation floor held during evaluation
    bool eval_greedy{false};   // pure-greedy alternative
    EpisodeConfig episode;
    AgentConfig agent;

    void validate() const;  // throws std::invalid_argument
    std::string to_json() const;
    static ExperimentConfig from_json(const std::string& text);
};

/// Uniform over the legal actions; ignores the state.
Policy make_random_policy();

/// Epsilon-greedy over the network's action values.
Policy make_agent_policy(const Mlp& net, double epsilon);

struct CurvePoint {
    int episode{0};
    long env_steps{0};
    double epsilon{0.0};
    double mean_loss{0.0};
    double episode_reward{0.0};
    bool collided{false};
};

struct TrainingResult {
    DdqnAgent agent;
    std::vector<CurvePoint> curve;
    int counted_collisions{0};
};

/// Train the agent over the configured episodes (round-robin across the
/// training layouts), one gradient step per action. Deterministic per seed.
TrainingResult run_training(const ExperimentConfig& config);

std::string curve_to_csv(const std::vector<CurvePoint>& curve);

struct RoadMetrics {
    LayoutId layout{LayoutId::LShapedJunction};
    int episodes{0};
    int collisions{0};
    std::optional<double> mean_ttc;
};

struct MetricsReport {
    std::string policy;
    std::string ablation;
    int episodes{0};
    int collisions{0};
    int excluded_unavoidable{0};
    std::optional<double> mean_ttc;  // over collided episodes only
    std::vector<RoadMetrics> per_road;

    std::string to_json() const;
    static MetricsReport from_json(const std::string& text);
};

struct EvaluationResult {
    MetricsReport report;
    std::vector<EpisodeTrace> traces;
};

/// Evaluate a policy over eval_episodes per evaluation layout. Episode seeds
/// depend only on (config.seed, layout, index) so rival policies see
/// identical scenario seeds. `net` supplies the trained policy and may be
/// null for Random.
EvaluationResult run_evaluation(const ExperimentConfig& config, PolicyKind policy,
                                const Mlp* net = nullptr, bool keep_traces = false);

struct ComparisonRow {
    std::string road;  // layout name or "total"
    std::string policy;
    int episodes{0};
    int collisions{0};
    std::optional<double> mean_ttc;
    double collision_ratio_vs_baseline{0.0};  // baseline = last report
};

struct ComparisonTable {
    std::vector<std::string> policies;
    std::string baseline;
    std::vector<ComparisonRow> rows;

    std::string to_csv() const;
    std::string to_json() const;
};

/// Align >= 2 reports per road and compute collision ratios against the last
/// report (the baseline). Mismatched road sets are a validation error.
ComparisonTable compare(const std::vector<MetricsReport>& reports);

/// One-sided two-proportion z-test p-value for H1: c1/n1 > c2/n2.
double two_proportion_p_value(int c1, int n1, int c2, int n2);

}  // namespace scengen
