#include "dietsonar/nn/loss.hpp"

#include <algorithm>
#include <cmath>

namespace dietsonar::nn {

namespace {

constexpr double kProbFloor = 1e-12;

void check_distribution(std::span<const double> probs, int target) {
    if (probs.empty()) throw ArgumentError("focal loss: empty probability vector");
    if (target < 0 || target >= static_cast<int>(probs.size()))
        throw ArgumentError("focal loss: target class out of range");
    double sum = 0.0;
    for (const double p : probs) {
        if (!(p >= -1e-9) || !(p <= 1.0 + 1e-6) || !std::isfinite(p))
            throw ArgumentError("focal loss: probabilities must lie in [0, 1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) throw ArgumentError("focal loss: probabilities must sum to 1");
}

}  // namespace

void softmax(std::span<const double> logits, std::span<double> probs) {
    if (logits.empty() || probs.size() != logits.size()) throw ArgumentError("softmax: size mismatch");
    const double max_logit = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        probs[i] = std::exp(logits[i] - max_logit);
        sum += probs[i];
    }
    for (auto& p : probs) p /= sum;
}

double focal_loss(std::span<const double> probs, int target, const FocalLossConfig& cfg) {
    cfg.validate();
    check_distribution(probs, target);
    const double p_t = std::clamp(probs[static_cast<std::size_t>(target)], kProbFloor, 1.0);
    return -cfg.alpha_for(target) * std::pow(1.0 - p_t, cfg.gamma) * std::log(p_t);
}

void focal_loss_grad_logits(std::span<const double> probs, int target, const FocalLossConfig& cfg,
                            std::span<double> d_logits) {
    cfg.validate();
    check_distribution(probs, target);
    if (d_logits.size() != probs.size()) throw ArgumentError("focal loss: gradient size mismatch");
    const double p_t = std::clamp(probs[static_cast<std::size_t>(target)], kProbFloor, 1.0);
    const double u = 1.0 - p_t;
    // dL/dp_t; the u == 0 limit is 0 because dp_t/dz vanishes there too.
    double dl_dp = 0.0;
    if (u > 0.0) {
        dl_dp = cfg.alpha_for(target) *
                (cfg.gamma * std::pow(u, cfg.gamma - 1.0) * std::log(p_t) - std::pow(u, cfg.gamma) / p_t);
    } else if (cfg.gamma == 0.0) {
        dl_dp = -cfg.alpha_for(target) / p_t;
    }
    // dp_t/dz_j = p_t * (delta_tj - p_j).
    for (std::size_t j = 0; j < probs.size(); ++j) {
        const double delta = static_cast<int>(j) == target ? 1.0 : 0.0;
        d_logits[j] = dl_dp * p_t * (delta - probs[j]);
    }
}

}  // namespace dietsonar::nn
