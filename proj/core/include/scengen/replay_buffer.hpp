#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "scengen/rng.hpp"

namespace scengen {

struct Transition {
    std::vector<double> s;
    int a{0};
    double r{0.0};
    std::vector<double> s_next;
    bool done{false};
};

struct PerSample {
    std::vector<Transition> transitions;
    std::vector<std::size_t> indices;
    std::vector<double> weights;  // importance weights, max-normalized
};

/// Ring buffer with proportional prioritization: P(i) = p_i^alpha / sum_j
/// p_j^alpha, importance weights (N * P(i))^-beta normalized by the max.
class PrioritizedBuffer {
public:
    explicit PrioritizedBuffer(std::size_t capacity, double alpha = 0.6, double eps_p = 1e-3)
        : capacity_(capacity), alpha_(alpha), eps_p_(eps_p) {}

    std::size_t size() const { return items_.size(); }
    std::size_t capacity() const { return capacity_; }
    double alpha() const { return alpha_; }

    /// Push with priority |td_error| + eps_p; without a TD error the entry
    /// gets the maximal current priority so it is sampled at least once.
    void push(Transition t, std::optional<double> td_error = std::nullopt);

    PerSample sample(std::size_t batch_size, double beta, Rng& rng) const;

    void update_priority(std::size_t index, double td_error);

    double priority(std::size_t index) const { return priorities_.at(index); }

private:
    std::size_t capacity_;
    double alpha_;
    double eps_p_;
    std::vector<Transition> items_;
    std::vector<double> priorities_;
    std::size_t write_pos_{0};
    double max_priority_{1.0};
};

}  // namespace scengen
