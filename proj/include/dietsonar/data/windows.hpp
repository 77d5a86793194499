#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dietsonar/data/timeline.hpp"
#include "dietsonar/signal/echo_profile.hpp"

namespace dietsonar::data {

// One labeled sliding window of a differential echo profile,
// tensor layout [channel][bin][frame].
struct WindowedSample {
    std::vector<float> tensor;
    int n_channels = 0;
    int n_bins = 0;
    int n_frames = 0;
    ActivityClass label = ActivityClass::null_activity;
    double start_time_s = 0.0;
    double duration_s = 0.0;
    std::string group;  // scene / participant id for leave-one-out splits

    std::size_t tensor_size() const {
        return static_cast<std::size_t>(n_channels) * n_bins * n_frames;
    }
    float at(int c, int r, int t) const {
        return tensor[(static_cast<std::size_t>(c) * n_bins + r) * n_frames + t];
    }
};

struct WindowConfig {
    double window_s = 2.0;
    double overlap = 0.5;
    int n_bins = 150;

    int window_frames(int frame_rate) const;
    int hop_frames(int frame_rate) const;
    void validate() const {
        if (!(window_s > 0.0)) throw ConfigError("windows: window_s must be positive");
        if (!(overlap >= 0.0 && overlap < 1.0)) throw ConfigError("windows: overlap must be in [0, 1)");
        if (n_bins < 1) throw ConfigError("windows: n_bins must be positive");
    }
};

// Cuts the profile into range-cropped windows every window_s*(1-overlap)
// seconds; the trailing partial window is dropped. Labels and groups are
// left unset. A profile shorter than one window yields an empty sequence.
std::vector<WindowedSample> slice_windows(const signal::DifferentialEchoProfile& profile,
                                          const WindowConfig& cfg);

// Labels each window with the majority class over its covered seconds;
// ties go to the higher-priority (rarer) class. Throws ArgumentError if a
// window extends past the timeline.
void assign_labels(std::vector<WindowedSample>& windows, const FrameTimeline& timeline);

struct AugmentConfig {
    double noise_fraction = 0.05;
    // Absolute noise sigma; values <= 0 mean 0.05 x the window's own std.
    double noise_sigma = 0.0;
    double mask_fraction = 0.05;
    std::uint64_t seed = 0;
    bool keep_originals = false;

    void validate() const {
        if (noise_fraction < 0.0 || noise_fraction > 1.0 || mask_fraction < 0.0 || mask_fraction > 1.0)
            throw ConfigError("augment: fractions must be in [0, 1]");
    }
};

// Adds Gaussian noise to round(noise_fraction*N) windows and zeroes a
// contiguous band of round(0.05*n_bins) range rows in an independently drawn
// round(mask_fraction*N) windows. Labels and shapes never change. With
// keep_originals the modified windows are appended instead of replaced.
void augment(std::vector<WindowedSample>& samples, const AugmentConfig& cfg);

// Exact disjoint partition by group id. Throws ArgumentError for an unknown
// holdout id.
std::pair<std::vector<WindowedSample>, std::vector<WindowedSample>> split_by_group(
    std::vector<WindowedSample> samples, const std::string& holdout);

std::vector<std::string> group_ids(const std::vector<WindowedSample>& samples);

}  // namespace dietsonar::data
