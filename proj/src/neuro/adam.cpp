#include "desmoke/adam.hpp"

#include <cmath>

namespace desmoke {

void adam_step(std::vector<double>& value, const std::vector<double>& grad, AdamState& state,
               const AdamConfig& cfg) {
    require(value.size() == grad.size(), ErrorKind::shape, "adam_step: shape mismatch");
    if (state.m.empty()) {
        state.m.assign(value.size(), 0.0);
        state.v.assign(value.size(), 0.0);
    }
    require(state.m.size() == value.size(), ErrorKind::shape, "adam_step: stale state");

    state.step += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < value.size(); ++i) {
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grad[i];
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        value[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.eps);
    }
}

void AdamOptimizer::step() {
    for (std::size_t i = 0; i < params_.size(); ++i) {
        adam_step(params_[i]->value, params_[i]->grad, states_[i], cfg_);
    }
}

}  // namespace desmoke
