#pragma once

#include <array>
#include <vector>

#include "dietsonar/errors.hpp"

namespace dietsonar::signal {

// One linear up-chirp: frequency sweeps f_start -> f_end over n_samples.
struct ChirpParams {
    double f_start = 0.0;    // Hz
    double f_end = 0.0;      // Hz
    int n_samples = 0;       // samples per sweep period
    double sample_rate = 0;  // Hz
    double amplitude = 1.0;  // in (0, 1]

    double sweep_period_s() const { return static_cast<double>(n_samples) / sample_rate; }

    void validate() const {
        if (sample_rate <= 0.0) throw ConfigError("chirp: sample_rate must be positive");
        if (!(0.0 < f_start && f_start < f_end && f_end < sample_rate / 2.0))
            throw ConfigError("chirp: need 0 < f_start < f_end < Nyquist");
        if (n_samples < 2) throw ConfigError("chirp: n_samples must be >= 2");
        if (!(amplitude > 0.0 && amplitude <= 1.0)) throw ConfigError("chirp: amplitude must be in (0, 1]");
    }
};

// sample k = A * sin(2*pi*(f_start*t + (f_end-f_start)/(2T)*t^2)), t = k/fs.
// Phase starts at zero, no amplitude taper.
std::vector<double> generate_chirp(const ChirpParams& params);

// Global sensing parameters: two speaker bands, shared receiver clock.
struct SensingConfig {
    std::array<ChirpParams, 2> bands{};  // [0] low band, [1] high band
    double sample_rate = 50000.0;        // Hz
    double speed_of_sound = 343.0;       // m/s
    int range_bins_full = 600;           // one bin per correlation lag
    int frames_per_second = 83;          // echo-profile columns per second

    double bin_resolution_m() const { return speed_of_sound / (2.0 * sample_rate); }
    double max_range_m() const { return distance_for_bin(range_bins_full); }
    // One-way distance of a range bin; ordered so that the standard config
    // yields the exact decimals 0.00343 * bin would suggest.
    double distance_for_bin(int bin) const {
        return static_cast<double>(bin) * speed_of_sound / (2.0 * sample_rate);
    }
    int chirp_samples() const { return bands[0].n_samples; }

    // 18-21.5 kHz and 21.5-24.5 kHz bands, 600-sample chirps at 50 kHz.
    static SensingConfig standard();

    void validate() const;
};

}  // namespace dietsonar::signal
