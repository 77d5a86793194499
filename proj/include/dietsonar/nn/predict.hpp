#pragma once

#include <array>
#include <vector>

#include "dietsonar/labels.hpp"

namespace dietsonar::nn {

// One classified sliding window: class distribution plus its argmax.
struct WindowPrediction {
    double start_time_s = 0.0;
    std::array<float, kNumClasses> probs{};
    ActivityClass label = ActivityClass::null_activity;

    float confidence() const { return probs[static_cast<std::size_t>(label)]; }
};

using FramePredictions = std::vector<WindowPrediction>;

}  // namespace dietsonar::nn
