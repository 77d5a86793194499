#pragma once

#include <cstdint>
#include <vector>

#include "dietsonar/signal/audio_stream.hpp"
#include "dietsonar/signal/chirp.hpp"

namespace dietsonar::signal {

enum class Mic : std::uint8_t { left = 0, right = 1 };

// One logical echo-profile channel: a (microphone, transmit band) pair.
struct ChannelDesc {
    Mic mic = Mic::left;
    int band = 0;
};

namespace detail {

// Shared tensor body of echo and differential profiles:
// data layout [channel][range bin][frame], time contiguous.
struct ProfileTensor {
    int n_channels = 0;
    int n_bins = 0;
    std::int64_t n_frames = 0;
    double bin_resolution_m = 0.0;
    int frame_rate = 0;
    std::vector<ChannelDesc> layout;
    std::vector<float> data;

    std::int64_t index(int c, int r, std::int64_t t) const {
        return (static_cast<std::int64_t>(c) * n_bins + r) * n_frames + t;
    }
    float at(int c, int r, std::int64_t t) const { return data[static_cast<std::size_t>(index(c, r, t))]; }
    float& at(int c, int r, std::int64_t t) { return data[static_cast<std::size_t>(index(c, r, t))]; }
    const float* row(int c, int r) const { return data.data() + index(c, r, 0); }
    float* row(int c, int r) { return data.data() + index(c, r, 0); }
    double duration_s() const {
        return frame_rate > 0 ? static_cast<double>(n_frames) / frame_rate : 0.0;
    }
};

}  // namespace detail

// Cross-correlation magnitudes per (mic, band) channel; the acoustic
// analog of a Range-FFT. Row r maps to one-way distance r * bin_resolution_m.
struct EchoProfile : detail::ProfileTensor {};

// First difference of an EchoProfile along time; static reflections cancel.
struct DifferentialEchoProfile : detail::ProfileTensor {};

// Chirp-aligned frame start sample positions. One correlation column per
// 600-sample hop, truncated to frames_per_second columns per whole second
// (the hop cadence is slightly faster than 83/s, so roughly one frame every
// three seconds is dropped to hold the advertised frame rate).
std::vector<std::int64_t> frame_start_positions(std::int64_t n_samples, const SensingConfig& cfg);

// Builds the echo profile of a two-microphone stream: per (mic, band)
// channel the stream is bandpass filtered, each chirp-aligned frame is
// circularly correlated against that band's template chirp, and the
// correlation magnitudes are stacked as columns. n_bins = 0 keeps the full
// range (cfg.range_bins_full); smaller values compute a cropped profile.
EchoProfile compute_echo_profile(const AudioStream& stream, const SensingConfig& cfg, int n_bins = 0);

// data[c][r][t] = echo[c][r][t+1] - echo[c][r][t]. Frame count drops by one.
DifferentialEchoProfile differentiate(const EchoProfile& echo);

// Keeps range rows [0, n_bins).
EchoProfile crop_range(const EchoProfile& profile, int n_bins);
DifferentialEchoProfile crop_range(const DifferentialEchoProfile& profile, int n_bins);

}  // namespace dietsonar::signal
