#include "scengen/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace scengen {

Mlp::Mlp(std::vector<int> dims, Rng& rng) : dims_(std::move(dims)) {
    if (dims_.size() < 2) throw std::invalid_argument("Mlp needs at least two layers");
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
        int in = dims_[l], out = dims_[l + 1];
        double bound = std::sqrt(6.0 / (in + out));
        std::vector<double> w(std::size_t(in) * out);
        for (auto& x : w) x = rng.uniform(-bound, bound);
        w_.push_back(std::move(w));
        b_.push_back(std::vector<double>(out, 0.0));
    }
}

std::vector<double> Mlp::forward(const std::vector<double>& input) const {
    std::vector<double> act = input;
    for (std::size_t l = 0; l < w_.size(); ++l) {
        int in = dims_[l], out = dims_[l + 1];
        std::vector<double> next(out);
        for (int j = 0; j < out; ++j) {
            double v = b_[l][j];
            for (int i = 0; i < in; ++i) v += act[i] * w_[l][std::size_t(i) * out + j];
            next[j] = l + 1 < w_.size() ? std::max(0.0, v) : v;
        }
        act = std::move(next);
    }
    return act;
}

std::vector<std::vector<double>> Mlp::forward_cached(const std::vector<double>& input) const {
    std::vector<std::vector<double>> acts;
    acts.push_back(input);
    for (std::size_t l = 0; l < w_.size(); ++l) {
        int in = dims_[l], out = dims_[l + 1];
        std::vector<double> next(out);
        for (int j = 0; j < out; ++j) {
            double v = b_[l][j];
            for (int i = 0; i < in; ++i) v += acts[l][i] * w_[l][std::size_t(i) * out + j];
            next[j] = l + 1 < w_.size() ? std::max(0.0, v) : v;
        }
        acts.push_back(std::move(next));
    }
    return acts;
}

void Mlp::backward(const std::vector<std::vector<double>>& acts,
                   const std::vector<double>& grad_output, MlpGrad& grad) const {
    std::vector<double> delta = grad_output;
    for (std::size_t l = w_.size(); l-- > 0;) {
        int in = dims_[l], out = dims_[l + 1];
        const auto& a_in = acts[l];
        for (int j = 0; j < out; ++j) {
            grad.b[l][j] += delta[j];
            for (int i = 0; i < in; ++i) grad.w[l][std::size_t(i) * out + j] += a_in[i] * delta[j];
        }
        if (l == 0) break;
        std::vector<double> prev(in, 0.0);
        for (int i = 0; i < in; ++i) {
            if (acts[l][i] <= 0.0) continue;  // ReLU gate
            double v = 0.0;
            for (int j = 0; j < out; ++j) v += w_[l][std::size_t(i) * out + j] * delta[j];
            prev[i] = v;
        }
        delta = std::move(prev);
    }
}

MlpGrad Mlp::zero_grad() const {
    MlpGrad g;
    for (std::size_t l = 0; l < w_.size(); ++l) {
        g.w.push_back(std::vector<double>(w_[l].size(), 0.0));
        g.b.push_back(std::vector<double>(b_[l].size(), 0.0));
    }
    return g;
}

std::string Mlp::to_json() const {
    nlohmann::json j;
    j["dims"] = dims_;
    j["weights"] = w_;
    j["biases"] = b_;
    return j.dump();
}

Mlp Mlp::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Mlp net;
    net.dims_ = j.at("dims").get<std::vector<int>>();
    net.w_ = j.at("weights").get<std::vector<std::vector<double>>>();
    net.b_ = j.at("biases").get<std::vector<std::vector<double>>>();
    if (net.w_.size() + 1 != net.dims_.size()) throw std::runtime_error("checkpoint dims mismatch");
    return net;
}

void Adam::step(Mlp& net, const MlpGrad& grad) {
    if (m_w_.empty()) {
        for (const auto& w : net.weights()) {
            m_w_.push_back(std::vector<double>(w.size(), 0.0));
            v_w_.push_back(std::vector<double>(w.size(), 0.0));
        }
        for (const auto& b : net.biases()) {
            m_b_.push_back(std::vector<double>(b.size(), 0.0));
            v_b_.push_back(std::vector<double>(b.size(), 0.0));
        }
    }
    ++t_;
    double c1 = 1.0 - std::pow(beta1_, double(t_));
    double c2 = 1.0 - std::pow(beta2_, double(t_));
    auto update = [&](std::vector<double>& p, const std::vector<double>& g, std::vector<double>& m,
                      std::vector<double>& v) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = beta1_ * m[i] + (1.0 - beta1_) * g[i];
            v[i] = beta2_ * v[i] + (1.0 - beta2_) * g[i] * g[i];
            p[i] -= lr_ * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps_);
        }
    };
    for (std::size_t l = 0; l < net.weights().size(); ++l) {
        update(net.weights()[l], grad.w[l], m_w_[l], v_w_[l]);
        update(net.biases()[l], grad.b[l], m_b_[l], v_b_[l]);
    }
}

}  // namespace scengen
