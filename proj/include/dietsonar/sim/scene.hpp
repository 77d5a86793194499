#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dietsonar/labels.hpp"
#include "dietsonar/signal/chirp.hpp"
#include "dietsonar/sim/trajectory.hpp"

namespace dietsonar::sim {

// A standalone reflector in the scene (e.g. a static torso or table edge).
struct Reflector {
    ReflectorPath path;
    double reflectivity = 1.0;
    bool visible_left = true;
    bool visible_right = true;

    void validate() const {
        path.validate();
        if (reflectivity < 0.0 || reflectivity > 1.0)
            throw ConfigError("reflector: reflectivity must be in [0, 1]");
    }
};

// One scripted activity: [start_s, end_s) performed with the given kinematics.
struct ActivityEntry {
    double start_s = 0.0;
    double end_s = 0.0;
    ActivityClass label = ActivityClass::null_activity;
    KinematicTemplate kinematics;
};

// Ordered, non-overlapping entries covering [0, total_duration_s].
struct ActivityScript {
    std::vector<ActivityEntry> entries;
    double total_duration_s = 0.0;

    void validate() const;
    // Range of the scripted actor at absolute time t, with short linear
    // blends across entry boundaries so the actor never teleports.
    double actor_range_at(double t) const;
    // One label per whole second (majority overlap within the second).
    std::vector<ActivityClass> labels_per_second() const;

    static constexpr double kBlendSeconds = 0.25;
};

// Everything needed to render two microphone streams.
struct Scene {
    std::vector<Reflector> reflectors;  // non-actor reflectors
    double actor_reflectivity = 0.05;
    bool actor_visible_left = true;
    bool actor_visible_right = true;
    double noise_rms = 0.0;
    std::uint64_t seed = 0;
    signal::SensingConfig sensing = signal::SensingConfig::standard();

    void validate() const;
};

// JSON round-trip for scenes and scripts (schemas documented in the README).
Scene scene_from_json_file(const std::string& path);
ActivityScript script_from_json_file(const std::string& path);
std::string scene_to_json(const Scene& scene);
std::string script_to_json(const ActivityScript& script);
void save_scene_json(const std::string& path, const Scene& scene);
void save_script_json(const std::string& path, const ActivityScript& script);

}  // namespace dietsonar::sim
