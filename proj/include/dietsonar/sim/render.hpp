#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dietsonar/data/timeline.hpp"
#include "dietsonar/signal/audio_stream.hpp"
#include "dietsonar/sim/scene.hpp"

namespace dietsonar::sim {

// Periodic repetition of one chirp, phase-locked to frame boundaries and
// conceptually running since forever (negative positions wrap).
struct ChirpTrain {
    std::vector<double> period;
    double sample_rate = 0.0;

    double sample_at(std::int64_t k) const {
        const auto n = static_cast<std::int64_t>(period.size());
        std::int64_t m = k % n;
        if (m < 0) m += n;
        return period[static_cast<std::size_t>(m)];
    }
    // Linear interpolation at a fractional sample position.
    double value_at(double pos) const {
        const double fl = std::floor(pos);
        const auto k0 = static_cast<std::int64_t>(fl);
        const double frac = pos - fl;
        return sample_at(k0) * (1.0 - frac) + sample_at(k0 + 1) * frac;
    }
};

// Echo of a transmit train off one moving reflector:
// out[k] = gain(t_k) * tx(t_k - 2*range(t_k)/c), gain = reflectivity /
// max(range, 0.05)^2, fractional delays linearly interpolated. Throws
// DataError if the trajectory leaves (0.02, max_range].
std::vector<double> delay_and_attenuate(const ChirpTrain& tx,
                                        const std::function<double(double)>& range_at,
                                        double reflectivity, const signal::SensingConfig& sensing,
                                        double duration_s);

struct RenderResult {
    signal::AudioStream audio;          // two microphones
    data::FrameTimeline truth;          // one label per second from the script
};

// Renders both microphone streams: the scripted actor plus every scene
// reflector echo both transmit bands, white Gaussian noise is added per
// microphone, and the ground-truth timeline is taken from the script.
// Deterministic for a fixed (scene, script, seed) at any thread count.
RenderResult render_scene(const Scene& scene, const ActivityScript& script);

}  // namespace dietsonar::sim
