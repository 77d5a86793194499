#include "dietsonar/data/windows.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <set>

#include "dietsonar/rng.hpp"

namespace dietsonar::data {

int WindowConfig::window_frames(int frame_rate) const {
    return static_cast<int>(std::lround(window_s * frame_rate));
}

int WindowConfig::hop_frames(int frame_rate) const {
    return std::max(1, static_cast<int>(std::lround(window_s * (1.0 - overlap) * frame_rate)));
}

std::vector<WindowedSample> slice_windows(const signal::DifferentialEchoProfile& profile,
                                          const WindowConfig& cfg) {
    cfg.validate();
    if (cfg.n_bins > profile.n_bins)
        throw ArgumentError("slice_windows: n_bins exceeds the profile's range axis");
    const int wf = cfg.window_frames(profile.frame_rate);
    const int hop = cfg.hop_frames(profile.frame_rate);

    std::vector<WindowedSample> windows;
    if (profile.n_frames < wf) return windows;
    const auto count = (profile.n_frames - wf) / hop + 1;
    windows.reserve(static_cast<std::size_t>(count));
    for (std::int64_t w = 0; w < count; ++w) {
        const std::int64_t start = w * hop;
        WindowedSample sample;
        sample.n_channels = profile.n_channels;
        sample.n_bins = cfg.n_bins;
        sample.n_frames = wf;
        sample.start_time_s = static_cast<double>(start) / profile.frame_rate;
        sample.duration_s = static_cast<double>(wf) / profile.frame_rate;
        sample.tensor.resize(sample.tensor_size());
        float* dst = sample.tensor.data();
        for (int c = 0; c < profile.n_channels; ++c)
            for (int r = 0; r < cfg.n_bins; ++r) {
                std::memcpy(dst, profile.row(c, r) + start, sizeof(float) * static_cast<std::size_t>(wf));
                dst += wf;
            }
        windows.push_back(std::move(sample));
    }
    return windows;
}

void assign_labels(std::vector<WindowedSample>& windows, const FrameTimeline& timeline) {
    timeline.validate();
    for (auto& w : windows) {
        const double t0 = w.start_time_s;
        const double t1 = t0 + w.duration_s;
        const auto first = static_cast<std::int64_t>(std::floor(t0 + 1e-9));
        const auto last = static_cast<std::int64_t>(std::ceil(t1 - 1e-9));
        if (first < 0 || last > static_cast<std::int64_t>(timeline.labels.size()))
            throw ArgumentError("assign_labels: window extends past the timeline");
        double weight[kNumClasses] = {};
        for (std::int64_t s = first; s < last; ++s) {
            const double overlap = std::min(t1, static_cast<double>(s + 1)) - std::max(t0, static_cast<double>(s));
            if (overlap <= 0.0) continue;
            weight[static_cast<int>(timeline.labels[static_cast<std::size_t>(s)])] += overlap;
        }
        int best = 0;
        for (int c = 1; c < kNumClasses; ++c) {
            const double diff = weight[c] - weight[best];
            if (diff > 1e-9 || (std::abs(diff) <= 1e-9 &&
                                label_priority(static_cast<ActivityClass>(c)) >
                                    label_priority(static_cast<ActivityClass>(best))))
                best = c;
        }
        w.label = static_cast<ActivityClass>(best);
    }
}

namespace {

// First k distinct indices of [0, n) by seeded partial Fisher-Yates.
std::vector<std::size_t> draw_without_replacement(std::size_t n, std::size_t k, std::uint64_t seed,
                                                  std::string_view stream) {
    std::vector<std::size_t> indices(n);
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    SequentialRng rng(seed, stream);
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.next_int(n - i));
        std::swap(indices[i], indices[j]);
    }
    indices.resize(std::min(k, n));
    return indices;
}

double window_std(const WindowedSample& w) {
    double mean = 0.0;
    for (const float v : w.tensor) mean += v;
    mean /= static_cast<double>(w.tensor.size());
    double var = 0.0;
    for (const float v : w.tensor) var += (v - mean) * (v - mean);
    return std::sqrt(var / static_cast<double>(w.tensor.size()));
}

}  // namespace

void augment(std::vector<WindowedSample>& samples, const AugmentConfig& cfg) {
    cfg.validate();
    if (samples.empty()) return;
    const std::size_t n = samples.size();
    const auto n_noise = static_cast<std::size_t>(std::lround(cfg.noise_fraction * static_cast<double>(n)));
    const auto n_mask = static_cast<std::size_t>(std::lround(cfg.mask_fraction * static_cast<double>(n)));
    const auto noise_picks = draw_without_replacement(n, n_noise, cfg.seed, "augment-noise-pick");
    const auto mask_picks = draw_without_replacement(n, n_mask, cfg.seed, "augment-mask-pick");

    const RandomStream noise_values(cfg.seed, "augment-noise-values");
    const RandomStream mask_offsets(cfg.seed, "augment-mask-offset");

    auto apply_noise = [&](WindowedSample& w, std::size_t original_index) {
        const double sigma = cfg.noise_sigma > 0.0 ? cfg.noise_sigma : 0.05 * window_std(w);
        const std::uint64_t base = static_cast<std::uint64_t>(original_index) * w.tensor.size();
        for (std::size_t i = 0; i < w.tensor.size(); ++i)
            w.tensor[i] += static_cast<float>(sigma * noise_values.gaussian(base + i));
    };
    auto apply_mask = [&](WindowedSample& w, std::size_t original_index) {
        const int width = std::max(1, static_cast<int>(std::lround(0.05 * w.n_bins)));
        const int max_offset = w.n_bins - width;
        const int offset = max_offset > 0
                               ? static_cast<int>(mask_offsets.uniform_int(original_index,
                                                                           static_cast<std::uint64_t>(max_offset + 1)))
                               : 0;
        for (int c = 0; c < w.n_channels; ++c)
            for (int r = offset; r < offset + width; ++r)
                std::memset(w.tensor.data() + (static_cast<std::size_t>(c) * w.n_bins + r) * w.n_frames, 0,
                            sizeof(float) * static_cast<std::size_t>(w.n_frames));
    };

    if (cfg.keep_originals) {
        // Append modified copies; a window picked for both noise and mask
        // yields one copy with both applied.
        std::set<std::size_t> picked(noise_picks.begin(), noise_picks.end());
        picked.insert(mask_picks.begin(), mask_picks.end());
        const std::set<std::size_t> noise_set(noise_picks.begin(), noise_picks.end());
        const std::set<std::size_t> mask_set(mask_picks.begin(), mask_picks.end());
        samples.reserve(samples.size() + picked.size());
        for (const std::size_t idx : picked) {
            WindowedSample copy = samples[idx];
            if (noise_set.count(idx)) apply_noise(copy, idx);
            if (mask_set.count(idx)) apply_mask(copy, idx);
            samples.push_back(std::move(copy));
        }
        return;
    }
    for (const std::size_t idx : noise_picks) apply_noise(samples[idx], idx);
    for (const std::size_t idx : mask_picks) apply_mask(samples[idx], idx);
}

std::pair<std::vector<WindowedSample>, std::vector<WindowedSample>> split_by_group(
    std::vector<WindowedSample> samples, const std::string& holdout) {
    bool found = false;
    for (const auto& s : samples)
        if (s.group == holdout) {
            found = true;
            break;
        }
    if (!found) throw ArgumentError("split: unknown holdout group: " + holdout);
    std::vector<WindowedSample> train, test;
    for (auto& s : samples) {
        (s.group == holdout ? test : train).push_back(std::move(s));
    }
    return {std::move(train), std::move(test)};
}

std::vector<std::string> group_ids(const std::vector<WindowedSample>& samples) {
    std::vector<std::string> ids;
    for (const auto& s : samples)
        if (std::find(ids.begin(), ids.end(), s.group) == ids.end()) ids.push_back(s.group);
    return ids;
}

}  // namespace dietsonar::data
