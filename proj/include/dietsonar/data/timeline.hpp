#pragma once

#include <string>
#include <vector>

#include "dietsonar/labels.hpp"

namespace dietsonar::data {

// Per-second activity labels (ground truth or predicted).
struct FrameTimeline {
    std::vector<ActivityClass> labels;

    std::size_t n_seconds() const { return labels.size(); }
    void validate() const {
        if (labels.empty()) throw ArgumentError("timeline: empty");
    }
};

// CSV with a "second,label" header, one row per second.
void save_timeline_csv(const std::string& path, const FrameTimeline& timeline);
FrameTimeline load_timeline_csv(const std::string& path);

}  // namespace dietsonar::data
