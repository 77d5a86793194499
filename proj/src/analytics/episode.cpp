#include "dietsonar/analytics/episode.hpp"

#include <json.hpp>

#include <algorithm>

namespace dietsonar::analytics {

data::FrameTimeline to_frame_timeline(const nn::FramePredictions& preds) {
    data::FrameTimeline timeline;
    if (preds.empty()) return timeline;
    // Window w spans seconds [w, w+2); second t is covered by windows t-1 and t.
    const std::size_t n_seconds = preds.size() + 1;
    timeline.labels.resize(n_seconds);
    for (std::size_t t = 0; t < n_seconds; ++t) {
        const nn::WindowPrediction* best = nullptr;
        for (const std::size_t w : {t == 0 ? preds.size() : t - 1, t}) {
            if (w >= preds.size()) continue;
            const auto& p = preds[w];
            if (best == nullptr || p.confidence() > best->confidence()) best = &p;
        }
        timeline.labels[t] = best != nullptr ? best->label : ActivityClass::null_activity;
    }
    return timeline;
}

std::vector<std::span<const ActivityClass>> segment(const data::FrameTimeline& timeline,
                                                    const SegmentConfig& cfg) {
    cfg.validate();
    std::vector<std::span<const ActivityClass>> slices;
    const auto len = static_cast<std::size_t>(cfg.segment_len_s);
    for (std::size_t begin = 0; begin + len <= timeline.labels.size(); begin += len)
        slices.emplace_back(timeline.labels.data() + begin, len);
    return slices;
}

int count_intakes(std::span<const ActivityClass> slice, const SegmentConfig& cfg) {
    const auto horizon = static_cast<std::size_t>(std::lround(cfg.chew_confirm_horizon_s));
    int count = 0;
    for (std::size_t i = 0; i < slice.size(); ++i) {
        if (slice[i] != ActivityClass::food_intake) continue;
        int chew = 0;
        for (std::size_t j = i + 1; j <= i + horizon && j < slice.size(); ++j)
            if (slice[j] == ActivityClass::chewing) ++chew;
        if (chew >= cfg.chew_confirm_count) ++count;
    }
    return count;
}

bool detect_eating_episode(std::span<const ActivityClass> slice, const SegmentConfig& cfg,
                           EpisodeMode mode) {
    if (slice.empty()) throw ArgumentError("detect_eating_episode: empty slice");
    if (mode == EpisodeMode::ground_truth) return count_intakes(slice, cfg) >= cfg.intake_threshold();
    std::size_t dietary = 0;
    for (const auto label : slice)
        if (label == ActivityClass::food_intake || label == ActivityClass::chewing) ++dietary;
    return static_cast<double>(dietary) / static_cast<double>(slice.size()) >= cfg.majority_fraction;
}

int chewing_seconds(std::span<const ActivityClass> slice) {
    return static_cast<int>(std::count(slice.begin(), slice.end(), ActivityClass::chewing));
}

EpisodeReport build_report(const data::FrameTimeline& pred, const data::FrameTimeline& truth,
                           const SegmentConfig& cfg) {
    if (pred.labels.size() != truth.labels.size())
        throw ArgumentError("build_report: timeline length mismatch");
    const auto pred_slices = segment(pred, cfg);
    const auto truth_slices = segment(truth, cfg);

    EpisodeReport report;
    int missed = 0, false_alarm = 0;
    double abs_intake_eat = 0.0, abs_intake_non = 0.0;
    double abs_chew_eat = 0.0, abs_chew_non = 0.0;
    for (std::size_t k = 0; k < truth_slices.size(); ++k) {
        SegmentReport seg;
        seg.index = static_cast<int>(k);
        seg.eating_pred = detect_eating_episode(pred_slices[k], cfg, EpisodeMode::predicted);
        seg.eating_truth = detect_eating_episode(truth_slices[k], cfg, EpisodeMode::ground_truth);
        seg.intakes_pred = count_intakes(pred_slices[k], cfg);
        seg.intakes_truth = count_intakes(truth_slices[k], cfg);
        seg.chew_s_pred = chewing_seconds(pred_slices[k]);
        seg.chew_s_truth = chewing_seconds(truth_slices[k]);

        if (seg.eating_truth) {
            ++report.n_eating_truth;
            if (!seg.eating_pred) ++missed;
            abs_intake_eat += std::abs(seg.intakes_truth - seg.intakes_pred);
            abs_chew_eat += std::abs(seg.chew_s_truth - seg.chew_s_pred);
        } else {
            ++report.n_noneating_truth;
            if (seg.eating_pred) ++false_alarm;
            abs_intake_non += std::abs(seg.intakes_truth - seg.intakes_pred);
            abs_chew_non += std::abs(seg.chew_s_truth - seg.chew_s_pred);
        }
        report.segments.push_back(seg);
    }
    if (report.n_eating_truth > 0) {
        report.fnr = static_cast<double>(missed) / report.n_eating_truth;
        report.mae_intakes_eating = abs_intake_eat / report.n_eating_truth;
        report.mae_chew_s_eating = abs_chew_eat / report.n_eating_truth;
    }
    if (report.n_noneating_truth > 0) {
        report.fpr = static_cast<double>(false_alarm) / report.n_noneating_truth;
        report.mae_intakes_noneating = abs_intake_non / report.n_noneating_truth;
        report.mae_chew_s_noneating = abs_chew_non / report.n_noneating_truth;
    }
    return report;
}

std::string episode_report_to_json(const EpisodeReport& report) {
    nlohmann::json j;
    nlohmann::json segments = nlohmann::json::array();
    for (const auto& s : report.segments) {
        segments.push_back({{"index", s.index},
                            {"is_eating_pred", s.eating_pred},
                            {"is_eating_truth", s.eating_truth},
                            {"intake_count_pred", s.intakes_pred},
                            {"intake_count_truth", s.intakes_truth},
                            {"chew_seconds_pred", s.chew_s_pred},
                            {"chew_seconds_truth", s.chew_s_truth}});
    }
    j["segments"] = std::move(segments);
    j["n_eating_truth"] = report.n_eating_truth;
    j["n_noneating_truth"] = report.n_noneating_truth;
    j["fnr"] = report.fnr;
    j["fpr"] = report.fpr;
    j["mae_intakes_eating"] = report.mae_intakes_eating;
    j["mae_intakes_noneating"] = report.mae_intakes_noneating;
    j["mae_chew_seconds_eating"] = report.mae_chew_s_eating;
    j["mae_chew_seconds_noneating"] = report.mae_chew_s_noneating;
    return j.dump(2);
}

}  // namespace dietsonar::analytics
