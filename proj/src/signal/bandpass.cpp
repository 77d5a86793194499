#include "dietsonar/signal/bandpass.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace dietsonar::signal {

namespace {

constexpr int kPrototypeOrder = 3;  // analog Butterworth lowpass order -> 6th-order bandpass

// -1 dB point of |H|^2 = 1/(1 + w^(2n)) for n = 3.
double one_db_frequency() {
    return std::pow(std::pow(10.0, 0.1) - 1.0, 1.0 / (2.0 * kPrototypeOrder));
}

std::complex<double> bilinear(std::complex<double> s, double fs) {
    return (2.0 * fs + s) / (2.0 * fs - s);
}

}  // namespace

BiquadCascade::BiquadCascade(std::vector<Biquad> sections, double sample_rate)
    : sections_(std::move(sections)), state_(sections_.size(), {0.0, 0.0}), sample_rate_(sample_rate) {}

void BiquadCascade::reset() {
    for (auto& z : state_) z = {0.0, 0.0};
}

double BiquadCascade::magnitude_at(double f) const {
    const std::complex<double> z =
        std::polar(1.0, -2.0 * std::numbers::pi * f / sample_rate_);
    std::complex<double> h = 1.0;
    for (const Biquad& s : sections_) {
        h *= (s.b0 + s.b1 * z + s.b2 * z * z) / (1.0 + s.a1 * z + s.a2 * z * z);
    }
    return std::abs(h);
}

BiquadCascade BiquadCascade::design_bandpass(double f_lo, double f_hi, double fs) {
    if (!(fs > 0.0) || !(0.0 < f_lo && f_lo < f_hi && f_hi < fs / 2.0))
        throw ConfigError("bandpass: need 0 < f_lo < f_hi < Nyquist");

    using cd = std::complex<double>;
    const double w1 = 2.0 * fs * std::tan(std::numbers::pi * f_lo / fs);  // prewarped edges
    const double w2 = 2.0 * fs * std::tan(std::numbers::pi * f_hi / fs);
    const double w0_sq = w1 * w2;
    const double bw = (w2 - w1) / one_db_frequency();  // widened so edges land at -1 dB

    // Prototype poles with non-negative imaginary part: e^{j2pi/3} and -1.
    const std::array<cd, 2> prototype = {cd(-0.5, std::sqrt(3.0) / 2.0), cd(-1.0, 0.0)};

    // Each section carries one zero at z=+1 and one at z=-1: (1 - z^-2).
    auto section_from_pair = [](cd z1, cd z2) {
        Biquad biq;
        biq.a1 = -(z1 + z2).real();
        biq.a2 = (z1 * z2).real();
        biq.b0 = 1.0;
        biq.b1 = 0.0;
        biq.b2 = -1.0;
        return biq;
    };

    std::vector<Biquad> sections;
    for (const cd& p : prototype) {
        const cd half = 0.5 * bw * p;
        const cd disc = std::sqrt(half * half - w0_sq);
        if (p.imag() > 0.0) {
            // Complex prototype pole: the conjugate prototype pole contributes
            // the mirror images, so each mapped pole pairs with its own
            // conjugate and yields one section.
            for (const cd& s_pole : {half + disc, half - disc}) {
                const cd zp = bilinear(s_pole, fs);
                sections.push_back(section_from_pair(zp, std::conj(zp)));
            }
        } else {
            // Real prototype pole: the two mapped poles form one section
            // together (conjugates for narrow bands, both real otherwise).
            sections.push_back(
                section_from_pair(bilinear(half + disc, fs), bilinear(half - disc, fs)));
        }
    }

    BiquadCascade cascade(std::move(sections), fs);

    // Unity gain at the (de-warped) geometric band center, spread over sections.
    const double f_center = fs / std::numbers::pi * std::atan(std::sqrt(w0_sq) / (2.0 * fs));
    const double mag = cascade.magnitude_at(f_center);
    if (!(mag > 0.0)) throw ConfigError("bandpass: degenerate design");
    const double section_gain = std::pow(1.0 / mag, 1.0 / static_cast<double>(cascade.sections_.size()));
    for (Biquad& s : cascade.sections_) {
        s.b0 *= section_gain;
        s.b1 *= section_gain;
        s.b2 *= section_gain;
    }
    return cascade;
}

AudioStream bandpass(const AudioStream& stream, double f_lo, double f_hi) {
    stream.validate();
    AudioStream out;
    out.sample_rate = stream.sample_rate;
    out.channels.reserve(stream.channels.size());
    for (const auto& ch : stream.channels) {
        BiquadCascade filt = BiquadCascade::design_bandpass(f_lo, f_hi, stream.sample_rate);
        std::vector<float> y(ch.size());
        for (std::size_t i = 0; i < ch.size(); ++i)
            y[i] = static_cast<float>(filt.step(static_cast<double>(ch[i])));
        out.channels.push_back(std::move(y));
    }
    return out;
}

}  // namespace dietsonar::signal
