#pragma once

#include <string>
#include <vector>

#include "scengen/mlp.hpp"
#include "scengen/replay_buffer.hpp"

namespace scengen {

struct EpsilonSchedule {
    double start{1.0};
    double end{0.1};
    long decay_steps{10000};
};

/// Linear interpolation from start to end over decay_steps, constant after.
double epsilon_at(long step, const EpsilonSchedule& schedule);

/// Double-DQN target: done -> r, else r + gamma * Q_eval(s', argmax_a
/// Q_sel(s', a)). Argmax ties break toward the lowest action index.
double ddqn_target(double r, const std::vector<double>& s_next, bool done, double gamma,
                   const Mlp& selection_net, const Mlp& evaluation_net);

/// Epsilon-greedy over the legal actions only. Throws on an empty mask.
int select_action(const Mlp& net, const std::vector<double>& s, double epsilon, Rng& rng,
                  const std::vector<bool>& action_mask);

struct AgentConfig {
    std::vector<int> dims{19, 64, 64, 45};
    double learning_rate{1e-3};
    double gamma{0.9};
    std::size_t batch_size{64};
    std::size_t buffer_capacity{20000};
    int sync_period{100};  // K: training steps between evaluation-net syncs
    double alpha_per{0.6};
    double beta_start{0.4};
    double beta_end{1.0};
    long beta_anneal_steps{10000};
    double eps_p{1e-3};
    EpsilonSchedule epsilon;
};

struct TrainResult {
    bool trained{false};
    double loss{0.0};
    std::vector<double> td_errors;
};

/// Selection/evaluation network pair with prioritized replay. Single-writer:
/// one thread owns the agent.
class DdqnAgent {
public:
    DdqnAgent(AgentConfig config, std::uint64_t seed);

    const AgentConfig& config() const { return config_; }
    const Mlp& selection_net() const { return selection_; }
    const Mlp& evaluation_net() const { return evaluation_; }
    PrioritizedBuffer& buffer() { return buffer_; }
    long train_steps() const { return train_steps_; }

    double epsilon(long env_step) const { return epsilon_at(env_step, config_.epsilon); }

    int act(const std::vector<double>& s, double eps, Rng& rng, const std::vector<bool>& mask) const {
        return select_action(selection_, s, eps, rng, mask);
    }

    void observe(Transition t) { buffer_.push(std::move(t)); }

    /// One prioritized batch: weighted MSE TD step on the selection network,
    /// priority refresh, periodic hard sync of the evaluation network.
    TrainResult train_step(Rng& rng);

    void sync_evaluation() { evaluation_ = selection_; }

    std::string checkpoint_json() const;
    static DdqnAgent from_checkpoint(const std::string& text, AgentConfig config);

private:
    AgentConfig config_;
    Mlp selection_;
    Mlp evaluation_;
    Adam optimizer_;
    PrioritizedBuffer buffer_;
    long train_steps_{0};
};

}  // namespace scengen
