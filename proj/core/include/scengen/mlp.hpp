#pragma once

#include <string>
#include <vector>

#include "scengen/rng.hpp"

namespace scengen {

struct MlpGrad {
    std::vector<std::vector<double>> w;
    std::vector<std::vector<double>> b;
};

/// Fully connected network, rectified hidden layers, identity output.
/// Weights for layer l are row-major dims[l] x dims[l+1].
class Mlp {
public:
    Mlp() = default;
    /// Glorot-uniform initialization: +-sqrt(6 / (fan_in + fan_out)).
    Mlp(std::vector<int> dims, Rng& rng);

    const std::vector<int>& dims() const { return dims_; }
    int input_size() const { return dims_.front(); }
    int output_size() const { return dims_.back(); }

    std::vector<double> forward(const std::vector<double>& input) const;

    /// Forward pass keeping post-activation values per layer (acts[0] is the
    /// input, acts.back() the linear output).
    std::vector<std::vector<double>> forward_cached(const std::vector<double>& input) const;

    /// Backpropagate dLoss/dOutput through the cached activations and add
    /// parameter gradients into `grad`.
    void backward(const std::vector<std::vector<double>>& acts,
                  const std::vector<double>& grad_output, MlpGrad& grad) const;

    MlpGrad zero_grad() const;

    std::vector<std::vector<double>>& weights() { return w_; }
    std::vector<std::vector<double>>& biases() { return b_; }
    const std::vector<std::vector<double>>& weights() const { return w_; }
    const std::vector<std::vector<double>>& biases() const { return b_; }

    /// Flat checkpoint layout: layer dims then row-major weights and biases,
    /// 64-bit floats.
    std::string to_json() const;
    static Mlp from_json(const std::string& text);

private:
    std::vector<int> dims_;
    std::vector<std::vector<double>> w_;
    std::vector<std::vector<double>> b_;
};

/// Adam with the standard moment constants.
class Adam {
public:
    explicit Adam(double lr = 1e-3, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    void step(Mlp& net, const MlpGrad& grad);
    void reset() { m_w_.clear(); m_b_.clear(); v_w_.clear(); v_b_.clear(); t_ = 0; }
    double learning_rate() const { return lr_; }

private:
    double lr_, beta1_, beta2_, eps_;
    std::vector<std::vector<double>> m_w_, v_w_, m_b_, v_b_;
    long t_{0};
};

}  // namespace scengen
