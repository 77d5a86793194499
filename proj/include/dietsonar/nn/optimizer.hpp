#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dietsonar/errors.hpp"

namespace dietsonar::nn {

struct TrainConfig {
    double lr0 = 1e-2;
    double lr_min = 0.0;
    int epochs = 30;
    int batch_size = 128;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::uint64_t seed = 0;
    double val_fraction = 0.1;  // per-group validation holdout within training data

    void validate() const {
        if (!(lr0 > 0.0)) throw ConfigError("train: lr0 must be positive");
        if (epochs < 1) throw ConfigError("train: epochs must be >= 1");
        if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
        if (!(val_fraction >= 0.0 && val_fraction < 1.0))
            throw ConfigError("train: val_fraction must be in [0, 1)");
    }
};

// Bias-corrected Adam over a flat parameter vector.
struct AdamState {
    std::vector<float> m;
    std::vector<float> v;
    std::int64_t t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    explicit AdamState(std::size_t n_params, double b1 = 0.9, double b2 = 0.999, double e = 1e-8)
        : m(n_params, 0.0f), v(n_params, 0.0f), beta1(b1), beta2(b2), eps(e) {}
};

// m <- b1*m + (1-b1)*g;  v <- b2*v + (1-b2)*g^2;
// theta <- theta - lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps).
// Throws TrainingError on a non-finite gradient entry.
void adam_step(AdamState& state, std::span<float> params, std::span<const float> grads, double lr);

// lr(e) = lr_min + (lr0 - lr_min) * (1 + cos(pi * e / epochs)) / 2, e in [0, epochs].
double cosine_lr(int epoch, const TrainConfig& cfg);

}  // namespace dietsonar::nn
