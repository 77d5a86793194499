#pragma once

#include <span>
#include <vector>

#include "dietsonar/signal/audio_stream.hpp"

namespace dietsonar::signal {

struct Biquad {
    double b0 = 0, b1 = 0, b2 = 0;  // numerator
    double a1 = 0, a2 = 0;          // denominator (a0 normalized to 1)
};

// Cascade of biquad sections applied forward-only (causal), direct form II
// transposed. Stateful across process() calls so long streams can be fed in
// chunks.
class BiquadCascade {
  public:
    // 6th-order Butterworth bandpass (three biquads). The design band is
    // widened so the nominal [f_lo, f_hi] edges sit at -1 dB, keeping the
    // whole passband within 1 dB of unity.
    static BiquadCascade design_bandpass(double f_lo, double f_hi, double sample_rate);

    void reset();

    double step(double x) {
        for (std::size_t i = 0; i < sections_.size(); ++i) {
            const Biquad& s = sections_[i];
            auto& z = state_[i];
            const double y = s.b0 * x + z[0];
            z[0] = s.b1 * x - s.a1 * y + z[1];
            z[1] = s.b2 * x - s.a2 * y;
            x = y;
        }
        return x;
    }

    void process(std::span<const double> in, std::span<double> out) {
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = step(in[i]);
    }

    // Steady-state magnitude response at frequency f (Hz).
    double magnitude_at(double f) const;

    const std::vector<Biquad>& sections() const { return sections_; }

  private:
    BiquadCascade(std::vector<Biquad> sections, double sample_rate);

    std::vector<Biquad> sections_;
    std::vector<std::array<double, 2>> state_;
    double sample_rate_ = 0.0;
};

// Filters every channel through a fresh 6th-order Butterworth bandpass.
// Throws ConfigError if the band violates (0, sample_rate/2).
AudioStream bandpass(const AudioStream& stream, double f_lo, double f_hi);

}  // namespace dietsonar::signal
