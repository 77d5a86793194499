#include "dietsonar/sim/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dietsonar::sim {

namespace {

double lerp_points(const std::vector<std::pair<double, double>>& pts, double t) {
    if (pts.empty()) throw ArgumentError("trajectory: piecewise path has no points");
    if (t <= pts.front().first) return pts.front().second;
    if (t >= pts.back().first) return pts.back().second;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (t <= pts[i].first) {
            const auto& [t0, r0] = pts[i - 1];
            const auto& [t1, r1] = pts[i];
            const double u = t1 > t0 ? (t - t0) / (t1 - t0) : 0.0;
            return r0 + u * (r1 - r0);
        }
    }
    return pts.back().second;
}

}  // namespace

double ReflectorPath::range_at(double t) const {
    switch (kind) {
        case Kind::constant:
            return range_m;
        case Kind::sinusoid:
            return center_m + amplitude_m * std::sin(2.0 * std::numbers::pi * rate_hz * t + phase);
        case Kind::piecewise_linear:
            return lerp_points(points, t);
    }
    return range_m;
}

void ReflectorPath::validate() const {
    if (kind == Kind::piecewise_linear) {
        if (points.empty()) throw ConfigError("reflector path: piecewise_linear needs points");
        for (std::size_t i = 1; i < points.size(); ++i)
            if (points[i].first < points[i - 1].first)
                throw ConfigError("reflector path: points must be time-sorted");
    }
    if (kind == Kind::sinusoid && amplitude_m < 0.0)
        throw ConfigError("reflector path: negative amplitude");
}

void KinematicTemplate::validate() const {
    if (kind == Kind::null_drift) {
        if (waypoints.empty()) throw ConfigError("kinematics: null_drift needs waypoints");
        return;
    }
    if (kind == Kind::chewing || kind == Kind::talking) {
        if (!(center_m > 0.0) || amplitude_m < 0.0 || amplitude_m >= center_m)
            throw ConfigError("kinematics: oscillation must keep range positive");
        return;
    }
    if (!(0.0 < near_m && near_m < far_m)) throw ConfigError("kinematics: need 0 < near < far");
    if (approach_s < 0.0 || hold_s < 0.0 || retreat_s < 0.0)
        throw ConfigError("kinematics: negative phase duration");
}

double kinematic_range(const KinematicTemplate& tmpl, double t, double duration_s) {
    using Kind = KinematicTemplate::Kind;
    t = std::clamp(t, 0.0, duration_s);
    switch (tmpl.kind) {
        case Kind::chewing:
        case Kind::talking:
            return tmpl.center_m +
                   tmpl.amplitude_m * std::sin(2.0 * std::numbers::pi * tmpl.rate_hz * t + tmpl.phase);
        case Kind::null_drift:
            return lerp_points(tmpl.waypoints, t);
        case Kind::intake:
        case Kind::drinking:
        case Kind::face_touch: {
            // approach -> hold (with tremor) -> retreat -> idle at far range.
            const double tremor =
                tmpl.tremor_amplitude_m *
                std::sin(2.0 * std::numbers::pi * tmpl.tremor_rate_hz * t + tmpl.phase);
            if (t < tmpl.approach_s) {
                const double u = tmpl.approach_s > 0.0 ? t / tmpl.approach_s : 1.0;
                return tmpl.far_m + u * (tmpl.near_m - tmpl.far_m);
            }
            const double t_hold = t - tmpl.approach_s;
            // face_touch holds to the end of the entry regardless of hold_s.
            const double hold =
                tmpl.kind == Kind::face_touch ? std::max(0.0, duration_s - tmpl.approach_s) : tmpl.hold_s;
            if (t_hold < hold) return tmpl.near_m + tremor;
            const double t_ret = t_hold - hold;
            if (tmpl.retreat_s > 0.0 && t_ret < tmpl.retreat_s) {
                const double u = t_ret / tmpl.retreat_s;
                return tmpl.near_m + u * (tmpl.far_m - tmpl.near_m);
            }
            return tmpl.far_m + tremor;
        }
    }
    return tmpl.far_m;
}

KinematicTemplate default_template(KinematicTemplate::Kind kind) {
    using Kind = KinematicTemplate::Kind;
    KinematicTemplate t;
    t.kind = kind;
    switch (kind) {
        case Kind::chewing:
            t.center_m = 0.12;
            t.amplitude_m = 0.01;
            t.rate_hz = 1.5;
            break;
        case Kind::talking:
            t.center_m = 0.10;
            t.amplitude_m = 0.004;
            t.rate_hz = 3.0;
            break;
        case Kind::intake:
            t.far_m = 0.45;
            t.near_m = 0.08;
            t.approach_s = 1.5;
            t.hold_s = 0.3;
            t.retreat_s = 1.2;
            break;
        case Kind::drinking:
            t.far_m = 0.40;
            t.near_m = 0.10;
            t.approach_s = 1.0;
            t.hold_s = 2.0;
            t.retreat_s = 1.0;
            break;
        case Kind::face_touch:
            t.far_m = 0.45;
            t.near_m = 0.05;
            t.approach_s = 1.0;
            t.hold_s = 3.0;
            t.retreat_s = 0.8;
            break;
        case Kind::null_drift:
            t.waypoints = {{0.0, 0.8}, {3.0, 1.2}, {6.0, 0.9}, {9.0, 1.4}};
            break;
    }
    return t;
}

}  // namespace dietsonar::sim
