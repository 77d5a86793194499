#pragma once

#include <array>
#include <string>
#include <vector>

#include "dietsonar/data/windows.hpp"
#include "dietsonar/nn/loss.hpp"
#include "dietsonar/nn/model.hpp"
#include "dietsonar/nn/optimizer.hpp"
#include "dietsonar/nn/predict.hpp"

namespace dietsonar::nn {

struct EpochLog {
    int epoch = 0;
    double mean_loss = 0.0;
    double lr = 0.0;
    double val_macro_f1 = 0.0;  // NaN when no validation split was given
};

struct TrainResult {
    Model model;
    std::vector<EpochLog> log;
    int best_epoch = -1;
    double best_val_macro_f1 = 0.0;
    int batches_per_epoch = 0;
    std::array<double, kNumClasses> alpha{};
};

// Inverse class frequency over the split, normalized to mean 1 across the
// classes present; absent classes get weight 1.
std::array<double, kNumClasses> inverse_frequency_alpha(const std::vector<data::WindowedSample>& samples);

// Full training loop: shuffled batches, focal loss, Adam with a per-epoch
// cosine schedule, per-epoch validation macro-F1, best-checkpoint selection.
// Deterministic for a fixed seed at any thread count. Throws ArgumentError on
// an empty train split and TrainingError on divergence.
TrainResult train(const std::vector<data::WindowedSample>& train_samples,
                  const std::vector<data::WindowedSample>& val_samples, const ModelConfig& model_cfg,
                  const TrainConfig& train_cfg, const FocalLossConfig& focal_cfg);

// Batch inference: one prediction per window, order preserving, eval mode.
FramePredictions predict(const Model& model, const std::vector<data::WindowedSample>& windows);

// Seeded per-group holdout of the given fraction of windows -> (rest, held).
std::pair<std::vector<data::WindowedSample>, std::vector<data::WindowedSample>> split_validation(
    std::vector<data::WindowedSample> samples, double fraction, std::uint64_t seed);

// JSON-lines, one object per epoch.
std::string train_log_to_jsonl(const std::vector<EpochLog>& log);

}  // namespace dietsonar::nn
