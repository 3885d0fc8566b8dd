#include "scengen/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace scengen {

double epsilon_at(long step, const EpsilonSchedule& schedule) {
    if (step < 0) throw std::invalid_argument("epsilon_at: negative step");
    if (step >= schedule.decay_steps) return schedule.end;
    double t = double(step) / double(schedule.decay_steps);
    return schedule.start + (schedule.end - schedule.start) * t;
}

namespace {
int argmax_lowest(const std::vector<double>& q) {
    int best = 0;
    for (int i = 1; i < int(q.size()); ++i)
        if (q[i] > q[best]) best = i;
    return best;
}
}  // namespace

double ddqn_target(double r, const std::vector<double>& s_next, bool done, double gamma,
                   const Mlp& selection_net, const Mlp& evaluation_net) {
    if (done) return r;
    auto q_sel = selection_net.forward(s_next);
    int a_star = argmax_lowest(q_sel);
    auto q_eval = evaluation_net.forward(s_next);
    return r + gamma * q_eval[a_star];
}

int select_action(const Mlp& net, const std::vector<double>& s, double epsilon, Rng& rng,
                  const std::vector<bool>& action_mask) {
    std::vector<int> legal;
    for (int i = 0; i < int(action_mask.size()); ++i)
        if (action_mask[i]) legal.push_back(i);
    if (legal.empty()) throw std::logic_error("select_action: no legal action");
    if (rng.uniform() < epsilon) return legal[rng.uniform_int(legal.size())];
    auto q = net.forward(s);
    int best = legal.front();
    for (int i : legal)
        if (q[i] > q[best]) best = i;
    return best;
}

DdqnAgent::DdqnAgent(AgentConfig config, std::uint64_t seed)
    : config_(config),
      optimizer_(config.learning_rate),
      buffer_(config.buffer_capacity, config.alpha_per, config.eps_p) {
    Rng rng(seed);
    selection_ = Mlp(config_.dims, rng);
    evaluation_ = selection_;
}

TrainResult DdqnAgent::train_step(Rng& rng) {
    TrainResult result;
    if (buffer_.size() < config_.batch_size) return result;

    double beta = config_.beta_end;
    if (train_steps_ < config_.beta_anneal_steps) {
        double t = double(train_steps_) / double(config_.beta_anneal_steps);
        beta = config_.beta_start + (config_.beta_end - config_.beta_start) * t;
    }
    PerSample batch = buffer_.sample(config_.batch_size, beta, rng);

    MlpGrad grad = selection_.zero_grad();
    double loss = 0.0;
    double inv_n = 1.0 / double(batch.transitions.size());
    for (std::size_t k = 0; k < batch.transitions.size(); ++k) {
        const Transition& t = batch.transitions[k];
        double target = ddqn_target(t.r, t.s_next, t.done, config_.gamma, selection_, evaluation_);
        auto acts = selection_.forward_cached(t.s);
        double td = acts.back()[t.a] - target;
        double w = batch.weights[k];
        loss += w * td * td * inv_n;
        std::vector<double> grad_out(selection_.output_size(), 0.0);
        grad_out[t.a] = 2.0 * w * td * inv_n;
        selection_.backward(acts, grad_out, grad);
        result.td_errors.push_back(std::abs(td));
        buffer_.update_priority(batch.indices[k], td);
    }
    optimizer_.step(selection_, grad);
    result.trained = true;
    result.loss = loss;
    ++train_steps_;
    if (train_steps_ % config_.sync_period == 0) sync_evaluation();
    return result;
}

std::string DdqnAgent::checkpoint_json() const {
    nlohmann::json j;
    j["selection"] = nlohmann::json::parse(selection_.to_json());
    j["evaluation"] = nlohmann::json::parse(evaluation_.to_json());
    j["train_steps"] = train_steps_;
    return j.dump();
}

DdqnAgent DdqnAgent::from_checkpoint(const std::string& text, AgentConfig config) {
    nlohmann::json j = nlohmann::json::parse(text);
    DdqnAgent agent(config, 0);
    agent.selection_ = Mlp::from_json(j.at("selection").dump());
    agent.evaluation_ = Mlp::from_json(j.at("evaluation").dump());
    agent.train_steps_ = j.value("train_steps", 0L);
    return agent;
}

}  // namespace scengen
