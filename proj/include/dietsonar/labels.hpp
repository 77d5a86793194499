#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "dietsonar/errors.hpp"

namespace dietsonar {

// The six dietary action classes tracked by the pipeline.
enum class ActivityClass : std::uint8_t {
    null_activity = 0,
    food_intake = 1,
    chewing = 2,
    drinking = 3,
    talking = 4,
    face_touch = 5,
};

inline constexpr int kNumClasses = 6;

inline constexpr std::array<std::string_view, kNumClasses> kClassNames = {
    "null", "food_intake", "chewing", "drinking", "talking", "face_touch",
};

constexpr std::string_view to_string(ActivityClass c) {
    return kClassNames[static_cast<int>(c)];
}

inline ActivityClass activity_from_string(std::string_view name) {
    for (int i = 0; i < kNumClasses; ++i) {
        if (kClassNames[i] == name) return static_cast<ActivityClass>(i);
    }
    throw ArgumentError("unknown activity class: " + std::string(name));
}

// Tie-break priority for window labeling: rarer/briefer actions win.
// Higher value wins: food_intake > drinking > chewing > face_touch > talking > null.
constexpr int label_priority(ActivityClass c) {
    switch (c) {
        case ActivityClass::food_intake: return 5;
        case ActivityClass::drinking: return 4;
        case ActivityClass::chewing: return 3;
        case ActivityClass::face_touch: return 2;
        case ActivityClass::talking: return 1;
        case ActivityClass::null_activity: return 0;
    }
    return 0;
}

}  // namespace dietsonar
