#include "scengen/replay_buffer.hpp"

#include <algorithm>
#include <cmath>

namespace scengen {

void PrioritizedBuffer::push(Transition t, std::optional<double> td_error) {
    double p = td_error ? std::abs(*td_error) + eps_p_ : max_priority_;
    max_priority_ = std::max(max_priority_, p);
    if (items_.size() < capacity_) {
        items_.push_back(std::move(t));
        priorities_.push_back(p);
    } else {
        items_[write_pos_] = std::move(t);
        priorities_[write_pos_] = p;
        write_pos_ = (write_pos_ + 1) % capacity_;
    }
}

PerSample PrioritizedBuffer::sample(std::size_t batch_size, double beta, Rng& rng) const {
    if (items_.empty()) throw std::logic_error("sampling from empty replay buffer");
    std::vector<double> prefix(items_.size());
    double total = 0.0;
    for (std::size_t i = 0; i < items_.size(); ++i) {
        total += std::pow(priorities_[i], alpha_);
        prefix[i] = total;
    }
    PerSample out;
    double n = double(items_.size());
    double w_max = 0.0;
    for (std::size_t k = 0; k < batch_size; ++k) {
        double u = rng.uniform() * total;
        auto it = std::lower_bound(prefix.begin(), prefix.end(), u);
        std::size_t idx = std::min<std::size_t>(std::distance(prefix.begin(), it), items_.size() - 1);
        double prob = std::pow(priorities_[idx], alpha_) / total;
        double w = std::pow(n * prob, -beta);
        out.transitions.push_back(items_[idx]);
        out.indices.push_back(idx);
        out.weights.push_back(w);
        w_max = std::max(w_max, w);
    }
    if (w_max > 0.0)
        for (auto& w : out.weights) w /= w_max;
    return out;
}

void PrioritizedBuffer::update_priority(std::size_t index, double td_error) {
    double p = std::abs(td_error) + eps_p_;
    priorities_.at(index) = p;
    max_priority_ = std::max(max_priority_, p);
}

}  // namespace scengen
