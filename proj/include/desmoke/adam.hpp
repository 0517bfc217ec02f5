#pragma once

#include "desmoke/tensor.hpp"

namespace desmoke {

struct AdamConfig {
    double learning_rate = 2e-4;
    double beta1 = 0.5;  // "momentum"
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    std::vector<double> m, v;
    long step = 0;
};

// One bias-corrected update: value -= lr * m_hat / (sqrt(v_hat) + eps).
void adam_step(std::vector<double>& value, const std::vector<double>& grad, AdamState& state,
               const AdamConfig& cfg);

// Applies adam_step across a parameter set, one shared config.
class AdamOptimizer {
public:
    AdamOptimizer(std::vector<Param*> params, const AdamConfig& cfg)
        : params_(std::move(params)), cfg_(cfg), states_(params_.size()) {}

    void step();
    long steps_taken() const { return states_.empty() ? 0 : states_[0].step; }

private:
    std::vector<Param*> params_;
    AdamConfig cfg_;
    std::vector<AdamState> states_;
};

}  // namespace desmoke
