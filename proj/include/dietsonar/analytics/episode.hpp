#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "dietsonar/data/timeline.hpp"
#include "dietsonar/nn/predict.hpp"

namespace dietsonar::analytics {

struct SegmentConfig {
    int segment_len_s = 270;             // 4.5 minutes
    double majority_fraction = 0.5;      // predicted-episode rule
    int chew_confirm_count = 2;          // chewing seconds required per intake
    double chew_confirm_horizon_s = 3.0; // window after the intake second

    // (t_w in minutes + 20) / 5, rounded to nearest: 4.9 -> 5 for 4.5 min.
    int intake_threshold() const {
        return static_cast<int>(std::lround((segment_len_s / 60.0 + 20.0) / 5.0));
    }
    void validate() const {
        if (segment_len_s <= 0) throw ArgumentError("segment: segment_len_s must be positive");
        if (chew_confirm_count < 1 || chew_confirm_horizon_s < 0.0)
            throw ArgumentError("segment: invalid confirmation rule");
    }
};

// Window predictions (2 s span, 1 s hop) to per-second labels. Each second is
// labeled by the more confident of the (up to two) windows covering it;
// confidence ties go to the earlier window. N windows cover N+1 seconds.
data::FrameTimeline to_frame_timeline(const nn::FramePredictions& preds);

// Consecutive non-overlapping segment_len_s slices; trailing partial dropped.
std::vector<std::span<const ActivityClass>> segment(const data::FrameTimeline& timeline,
                                                    const SegmentConfig& cfg);

// Counts confirmed intakes: a food_intake second counts when at least
// chew_confirm_count of the following horizon seconds are chewing.
int count_intakes(std::span<const ActivityClass> slice, const SegmentConfig& cfg);

enum class EpisodeMode {
    predicted,     // >= 50% of seconds labeled food_intake or chewing
    ground_truth,  // >= intake_threshold confirmed intakes
};

bool detect_eating_episode(std::span<const ActivityClass> slice, const SegmentConfig& cfg,
                           EpisodeMode mode);

int chewing_seconds(std::span<const ActivityClass> slice);

struct SegmentReport {
    int index = 0;
    bool eating_pred = false;
    bool eating_truth = false;
    int intakes_pred = 0;
    int intakes_truth = 0;
    int chew_s_pred = 0;
    int chew_s_truth = 0;
};

struct EpisodeReport {
    std::vector<SegmentReport> segments;
    int n_eating_truth = 0;
    int n_noneating_truth = 0;
    double fnr = 0.0;  // missed eating episodes / truth eating episodes
    double fpr = 0.0;  // falsely detected / truth non-eating episodes
    double mae_intakes_eating = 0.0;
    double mae_intakes_noneating = 0.0;
    double mae_chew_s_eating = 0.0;
    double mae_chew_s_noneating = 0.0;
};

// Per-segment episode analytics plus aggregate error rates. Timelines must
// have equal length; MAE aggregates are split by the truth eating flag and
// are 0 when a side has no segments.
EpisodeReport build_report(const data::FrameTimeline& pred, const data::FrameTimeline& truth,
                           const SegmentConfig& cfg);

std::string episode_report_to_json(const EpisodeReport& report);

}  // namespace dietsonar::analytics
