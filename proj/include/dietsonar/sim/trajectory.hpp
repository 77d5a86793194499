#pragma once

#include <utility>
#include <vector>

#include "dietsonar/errors.hpp"

namespace dietsonar::sim {

// Range-vs-time path of a standalone reflector.
struct ReflectorPath {
    enum class Kind { constant, sinusoid, piecewise_linear };
    Kind kind = Kind::constant;
    double range_m = 0.3;                            // constant
    double center_m = 0.3, amplitude_m = 0.0;        // sinusoid
    double rate_hz = 1.0, phase = 0.0;               // sinusoid
    std::vector<std::pair<double, double>> points;   // piecewise linear: (t_s, range_m)

    double range_at(double t) const;
    void validate() const;
};

// Named motion generator for one activity entry. Oscillatory kinds (chewing,
// talking) are sinusoids; gesture kinds (intake, drinking, face_touch) are
// approach / hold / retreat ramps with a small hold tremor; null_drift walks
// between far waypoints.
struct KinematicTemplate {
    enum class Kind { chewing, intake, drinking, talking, face_touch, null_drift };
    Kind kind = Kind::chewing;

    // oscillatory
    double center_m = 0.12;
    double amplitude_m = 0.01;
    double rate_hz = 1.5;
    double phase = 0.0;

    // gestures
    double far_m = 0.45;
    double near_m = 0.08;
    double approach_s = 1.5;
    double hold_s = 0.0;
    double retreat_s = 1.2;
    double tremor_amplitude_m = 0.0025;
    double tremor_rate_hz = 1.0;

    // null drift
    std::vector<std::pair<double, double>> waypoints;  // (t_local, range_m)

    void validate() const;
};

// Range at local time t within an entry of the given duration.
double kinematic_range(const KinematicTemplate& tmpl, double t_local, double duration_s);

// Spec-default template for a class, with per-entry seeded jitter applied to
// ranges, rates, and phases so scenes are not carbon copies of each other.
KinematicTemplate default_template(KinematicTemplate::Kind kind);

}  // namespace dietsonar::sim
