#include "dietsonar/signal/chirp.hpp"

#include <cmath>
#include <numbers>

namespace dietsonar::signal {

std::vector<double> generate_chirp(const ChirpParams& params) {
    params.validate();
    const double T = params.sweep_period_s();
    const double rate = (params.f_end - params.f_start) / (2.0 * T);
    std::vector<double> wave(static_cast<std::size_t>(params.n_samples));
    for (int k = 0; k < params.n_samples; ++k) {
        const double t = static_cast<double>(k) / params.sample_rate;
        const double phase = 2.0 * std::numbers::pi * (params.f_start * t + rate * t * t);
        wave[static_cast<std::size_t>(k)] = params.amplitude * std::sin(phase);
    }
    return wave;
}

SensingConfig SensingConfig::standard() {
    SensingConfig cfg;
    cfg.bands[0] = ChirpParams{18000.0, 21500.0, 600, 50000.0, 0.5};
    cfg.bands[1] = ChirpParams{21500.0, 24500.0, 600, 50000.0, 0.5};
    cfg.validate();
    return cfg;
}

void SensingConfig::validate() const {
    for (const auto& band : bands) band.validate();
    if (bands[0].n_samples != bands[1].n_samples)
        throw ConfigError("sensing: both bands must share one chirp length");
    if (bands[0].sample_rate != sample_rate || bands[1].sample_rate != sample_rate)
        throw ConfigError("sensing: band sample rates must match the receiver rate");
    // Bands may share an edge but must not overlap.
    const auto& lo = bands[0].f_start <= bands[1].f_start ? bands[0] : bands[1];
    const auto& hi = bands[0].f_start <= bands[1].f_start ? bands[1] : bands[0];
    if (lo.f_end > hi.f_start) throw ConfigError("sensing: bands overlap");
    if (range_bins_full < 1 || range_bins_full > bands[0].n_samples)
        throw ConfigError("sensing: range_bins_full must be in [1, chirp length]");
    if (frames_per_second < 1 ||
        static_cast<double>(frames_per_second) * bands[0].n_samples > sample_rate)
        throw ConfigError("sensing: frames_per_second exceeds the chirp cadence");
}

}  // namespace dietsonar::signal
