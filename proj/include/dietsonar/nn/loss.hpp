#pragma once

#include <array>
#include <span>
#include <vector>

#include "dietsonar/errors.hpp"
#include "dietsonar/labels.hpp"

namespace dietsonar::nn {

struct FocalLossConfig {
    double gamma = 2.0;
    // Per-class weights; empty means "derive inverse-frequency weights from
    // the training split, normalized to mean 1".
    std::vector<double> alpha;

    void validate() const {
        if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ConfigError("focal loss: gamma must be finite and >= 0");
        if (!alpha.empty() && static_cast<int>(alpha.size()) != kNumClasses)
            throw ConfigError("focal loss: alpha must have one weight per class");
        for (const double a : alpha)
            if (!(a >= 0.0)) throw ConfigError("focal loss: alpha weights must be >= 0");
    }
    double alpha_for(int target) const {
        return alpha.empty() ? 1.0 : alpha[static_cast<std::size_t>(target)];
    }
};

// Numerically stable softmax.
void softmax(std::span<const double> logits, std::span<double> probs);

// FL(p_t) = -alpha_t * (1 - p_t)^gamma * log(p_t), p_t clamped to [1e-12, 1].
// probs must be a valid distribution (entries in [0,1], summing to 1 within
// 1e-6); violations raise ArgumentError.
double focal_loss(std::span<const double> probs, int target, const FocalLossConfig& cfg);

// Gradient of focal_loss(softmax(z), target) with respect to the logits z.
void focal_loss_grad_logits(std::span<const double> probs, int target, const FocalLossConfig& cfg,
                            std::span<double> d_logits);

}  // namespace dietsonar::nn
