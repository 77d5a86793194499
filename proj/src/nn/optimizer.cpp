#include "dietsonar/nn/optimizer.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace dietsonar::nn {

void adam_step(AdamState& state, std::span<float> params, std::span<const float> grads, double lr) {
    if (params.size() != grads.size() || params.size() != state.m.size())
        throw ArgumentError("adam: parameter/gradient/state size mismatch");
    for (std::size_t i = 0; i < grads.size(); ++i) {
        if (!std::isfinite(grads[i]))
            throw TrainingError("adam: non-finite gradient at parameter index " + std::to_string(i) +
                                " (value " + std::to_string(grads[i]) + ")");
    }
    ++state.t;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    const auto b1 = static_cast<float>(state.beta1);
    const auto b2 = static_cast<float>(state.beta2);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const float g = grads[i];
        state.m[i] = b1 * state.m[i] + (1.0f - b1) * g;
        state.v[i] = b2 * state.v[i] + (1.0f - b2) * g * g;
        const double m_hat = static_cast<double>(state.m[i]) / bc1;
        const double v_hat = static_cast<double>(state.v[i]) / bc2;
        params[i] -= static_cast<float>(lr * m_hat / (std::sqrt(v_hat) + state.eps));
    }
}

double cosine_lr(int epoch, const TrainConfig& cfg) {
    cfg.validate();
    if (epoch < 0 || epoch > cfg.epochs) throw ArgumentError("cosine_lr: epoch out of [0, epochs]");
    const double phase = std::numbers::pi * static_cast<double>(epoch) / static_cast<double>(cfg.epochs);
    return cfg.lr_min + 0.5 * (cfg.lr0 - cfg.lr_min) * (1.0 + std::cos(phase));
}

}  // namespace dietsonar::nn
