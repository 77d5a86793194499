#include "dietsonar/signal/echo_profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "dietsonar/parallel.hpp"
#include "dietsonar/signal/bandpass.hpp"
#include "dietsonar/signal/correlation.hpp"

namespace dietsonar::signal {

std::vector<std::int64_t> frame_start_positions(std::int64_t n_samples, const SensingConfig& cfg) {
    const auto fs = static_cast<std::int64_t>(cfg.sample_rate);
    const std::int64_t hop = cfg.chirp_samples();
    const std::int64_t fps = cfg.frames_per_second;
    const std::int64_t total = n_samples * fps / fs;

    std::vector<std::int64_t> starts;
    starts.reserve(static_cast<std::size_t>(total));
    std::int64_t second = 0;
    std::int64_t kept_in_second = 0;
    for (std::int64_t t = 0; static_cast<std::int64_t>(starts.size()) < total; ++t) {
        const std::int64_t start = t * hop;
        const std::int64_t s = start / fs;
        if (s != second) {
            second = s;
            kept_in_second = 0;
        }
        if (kept_in_second < fps) {
            starts.push_back(start);
            ++kept_in_second;
        }
    }
    return starts;
}

namespace {

template <typename Profile>
Profile crop_range_impl(const Profile& profile, int n_bins) {
    if (n_bins < 1 || n_bins > profile.n_bins)
        throw ArgumentError("crop_range: n_bins must be in [1, profile bins]");
    if (n_bins == profile.n_bins) return profile;
    Profile out;
    static_cast<detail::ProfileTensor&>(out) = {
        profile.n_channels, n_bins,       profile.n_frames, profile.bin_resolution_m,
        profile.frame_rate, profile.layout, {}};
    out.data.resize(static_cast<std::size_t>(profile.n_channels) * n_bins * profile.n_frames);
    for (int c = 0; c < profile.n_channels; ++c)
        for (int r = 0; r < n_bins; ++r)
            std::memcpy(out.row(c, r), profile.row(c, r), sizeof(float) * static_cast<std::size_t>(profile.n_frames));
    return out;
}

}  // namespace

EchoProfile compute_echo_profile(const AudioStream& stream, const SensingConfig& cfg, int n_bins) {
    stream.validate();
    cfg.validate();
    if (stream.sample_rate != cfg.sample_rate)
        throw ArgumentError("echo profile: stream sample rate does not match the sensing config");
    const int chirp_len = cfg.chirp_samples();
    if (stream.n_samples() < chirp_len)
        throw ArgumentError("echo profile: stream shorter than one chirp period");
    if (n_bins == 0) n_bins = cfg.range_bins_full;
    if (n_bins < 1 || n_bins > chirp_len)
        throw ArgumentError("echo profile: n_bins must be in [1, chirp length]");

    const auto starts = frame_start_positions(stream.n_samples(), cfg);
    const auto n_frames = static_cast<std::int64_t>(starts.size());
    const int n_mics = stream.n_channels();
    const int n_bands = static_cast<int>(cfg.bands.size());

    EchoProfile profile;
    profile.n_channels = n_mics * n_bands;
    profile.n_bins = n_bins;
    profile.n_frames = n_frames;
    profile.bin_resolution_m = cfg.bin_resolution_m();
    profile.frame_rate = cfg.frames_per_second;
    profile.layout.resize(static_cast<std::size_t>(profile.n_channels));
    profile.data.assign(static_cast<std::size_t>(profile.n_channels) * n_bins * n_frames, 0.0f);

    std::vector<CircularCorrelator> correlators;
    correlators.reserve(static_cast<std::size_t>(n_bands));
    for (int b = 0; b < n_bands; ++b) correlators.emplace_back(generate_chirp(cfg.bands[b]));

    // One chain per (mic, band); chains are independent, so the channel loop
    // parallelizes without affecting the output.
    parallel_chunks(profile.n_channels, 1, [&](std::int64_t, std::int64_t c_begin, std::int64_t) {
        const int c = static_cast<int>(c_begin);
        const int mic = c / n_bands;
        const int band = c % n_bands;
        profile.layout[static_cast<std::size_t>(c)] = {static_cast<Mic>(mic), band};

        const auto& samples = stream.channels[static_cast<std::size_t>(mic)];
        const std::int64_t n = static_cast<std::int64_t>(samples.size());
        BiquadCascade filt =
            BiquadCascade::design_bandpass(cfg.bands[band].f_start, cfg.bands[band].f_end, cfg.sample_rate);
        const CircularCorrelator& corr = correlators[static_cast<std::size_t>(band)];
        auto ws = corr.make_workspace();

        std::vector<double> frame(static_cast<std::size_t>(chirp_len));
        std::vector<double> column(static_cast<std::size_t>(chirp_len));

        // The filter runs once over the stream in order; frames consume
        // filtered samples as they pass (frame starts strictly increase).
        std::int64_t filtered_upto = 0;
        for (std::int64_t t = 0; t < n_frames; ++t) {
            const std::int64_t p = starts[static_cast<std::size_t>(t)];
            while (filtered_upto < p) {
                filt.step(static_cast<double>(samples[static_cast<std::size_t>(filtered_upto)]));
                ++filtered_upto;
            }
            for (int i = 0; i < chirp_len; ++i) {
                const std::int64_t k = p + i;
                // The final frame of a stream may overrun by a fraction of a
                // chirp; missing samples are treated as silence.
                frame[static_cast<std::size_t>(i)] =
                    k < n ? filt.step(static_cast<double>(samples[static_cast<std::size_t>(k)])) : 0.0;
            }
            filtered_upto = std::max(filtered_upto, std::min(p + chirp_len, n));
            corr.correlate(frame, column, *ws);
            for (int r = 0; r < n_bins; ++r)
                profile.at(c, r, t) = static_cast<float>(std::abs(column[static_cast<std::size_t>(r)]));
        }
    });
    return profile;
}

DifferentialEchoProfile differentiate(const EchoProfile& echo) {
    if (echo.n_frames < 2) throw ArgumentError("differentiate: profile needs at least two frames");
    DifferentialEchoProfile diff;
    static_cast<detail::ProfileTensor&>(diff) = {
        echo.n_channels, echo.n_bins,  echo.n_frames - 1, echo.bin_resolution_m,
        echo.frame_rate, echo.layout, {}};
    diff.data.resize(static_cast<std::size_t>(echo.n_channels) * echo.n_bins * diff.n_frames);
    const std::int64_t n_rows = static_cast<std::int64_t>(echo.n_channels) * echo.n_bins;
    parallel_chunks(n_rows, 64, [&](std::int64_t, std::int64_t begin, std::int64_t end) {
        for (std::int64_t row = begin; row < end; ++row) {
            const int c = static_cast<int>(row / echo.n_bins);
            const int r = static_cast<int>(row % echo.n_bins);
            const float* src = echo.row(c, r);
            float* dst = diff.row(c, r);
            for (std::int64_t t = 0; t < diff.n_frames; ++t) dst[t] = src[t + 1] - src[t];
        }
    });
    return diff;
}

EchoProfile crop_range(const EchoProfile& profile, int n_bins) { return crop_range_impl(profile, n_bins); }

DifferentialEchoProfile crop_range(const DifferentialEchoProfile& profile, int n_bins) {
    return crop_range_impl(profile, n_bins);
}

}  // namespace dietsonar::signal
