#pragma once

#include <cstdint>
#include <vector>

#include "dietsonar/errors.hpp"

namespace dietsonar::signal {

// Raw multi-microphone audio, one float32 sequence per channel.
struct AudioStream {
    std::vector<std::vector<float>> channels;
    double sample_rate = 0.0;

    int n_channels() const { return static_cast<int>(channels.size()); }
    std::int64_t n_samples() const {
        return channels.empty() ? 0 : static_cast<std::int64_t>(channels[0].size());
    }
    double duration_s() const {
        return sample_rate > 0 ? static_cast<double>(n_samples()) / sample_rate : 0.0;
    }

    void validate() const {
        if (sample_rate <= 0.0) throw ArgumentError("audio: sample_rate must be positive");
        if (channels.empty()) throw ArgumentError("audio: no channels");
        for (const auto& ch : channels) {
            if (static_cast<std::int64_t>(ch.size()) != n_samples())
                throw ArgumentError("audio: channels must have equal length");
        }
    }
};

}  // namespace dietsonar::signal
