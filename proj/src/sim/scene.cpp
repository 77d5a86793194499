#include "dietsonar/sim/scene.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace dietsonar::sim {

using nlohmann::json;

void ActivityScript::validate() const {
    if (entries.empty()) throw ArgumentError("script: no entries");
    if (!(total_duration_s > 0.0)) throw ConfigError("script: total_duration_s must be positive");
    double cursor = 0.0;
    for (const auto& e : entries) {
        if (std::abs(e.start_s - cursor) > 1e-9)
            throw ConfigError("script: entries must be sorted, non-overlapping and gap-free");
        if (!(e.end_s > e.start_s)) throw ConfigError("script: entry must have positive duration");
        e.kinematics.validate();
        cursor = e.end_s;
    }
    if (std::abs(cursor - total_duration_s) > 1e-9)
        throw ConfigError("script: entries must cover [0, total_duration_s]");
}

double ActivityScript::actor_range_at(double t) const {
    // Entries are contiguous; find the one containing t.
    auto it = std::upper_bound(entries.begin(), entries.end(), t,
                               [](double v, const ActivityEntry& e) { return v < e.end_s; });
    if (it == entries.end()) it = std::prev(entries.end());
    const ActivityEntry& e = *it;
    const double local = t - e.start_s;
    const double r = kinematic_range(e.kinematics, local, e.end_s - e.start_s);
    if (it != entries.begin() && local < kBlendSeconds) {
        const ActivityEntry& prev = *std::prev(it);
        const double prev_end =
            kinematic_range(prev.kinematics, prev.end_s - prev.start_s, prev.end_s - prev.start_s);
        const double u = local / kBlendSeconds;
        return prev_end + u * (r - prev_end);
    }
    return r;
}

std::vector<ActivityClass> ActivityScript::labels_per_second() const {
    const auto n_seconds = static_cast<std::size_t>(std::floor(total_duration_s));
    std::vector<ActivityClass> labels(n_seconds, ActivityClass::null_activity);
    for (std::size_t s = 0; s < n_seconds; ++s) {
        const double lo = static_cast<double>(s);
        const double hi = lo + 1.0;
        double best_overlap = -1.0;
        for (const auto& e : entries) {
            const double overlap = std::min(hi, e.end_s) - std::max(lo, e.start_s);
            if (overlap > best_overlap + 1e-12) {
                best_overlap = overlap;
                labels[s] = e.label;
            }
        }
    }
    return labels;
}

void Scene::validate() const {
    sensing.validate();
    for (const auto& r : reflectors) r.validate();
    if (actor_reflectivity < 0.0 || actor_reflectivity > 1.0)
        throw ConfigError("scene: actor reflectivity must be in [0, 1]");
    if (noise_rms < 0.0) throw ConfigError("scene: noise_rms must be >= 0");
}

namespace {

json visibility_to_json(bool left, bool right) {
    json v = json::array();
    if (left) v.push_back("left");
    if (right) v.push_back("right");
    return v;
}

void visibility_from_json(const json& v, bool& left, bool& right) {
    left = right = false;
    for (const auto& name : v) {
        if (name == "left") left = true;
        else if (name == "right") right = true;
        else throw ConfigError("scene: visible_to entries must be \"left\" or \"right\"");
    }
}

json path_to_json(const ReflectorPath& p) {
    json j;
    switch (p.kind) {
        case ReflectorPath::Kind::constant:
            j["kind"] = "constant";
            j["range_m"] = p.range_m;
            break;
        case ReflectorPath::Kind::sinusoid:
            j["kind"] = "sinusoid";
            j["center_m"] = p.center_m;
            j["amplitude_m"] = p.amplitude_m;
            j["rate_hz"] = p.rate_hz;
            j["phase"] = p.phase;
            break;
        case ReflectorPath::Kind::piecewise_linear:
            j["kind"] = "piecewise_linear";
            j["points"] = p.points;
            break;
    }
    return j;
}

ReflectorPath path_from_json(const json& j) {
    ReflectorPath p;
    const std::string kind = j.at("kind");
    if (kind == "constant") {
        p.kind = ReflectorPath::Kind::constant;
        p.range_m = j.at("range_m");
    } else if (kind == "sinusoid") {
        p.kind = ReflectorPath::Kind::sinusoid;
        p.center_m = j.at("center_m");
        p.amplitude_m = j.at("amplitude_m");
        p.rate_hz = j.at("rate_hz");
        p.phase = j.value("phase", 0.0);
    } else if (kind == "piecewise_linear") {
        p.kind = ReflectorPath::Kind::piecewise_linear;
        for (const auto& pt : j.at("points"))
            p.points.emplace_back(pt.at(0).get<double>(), pt.at(1).get<double>());
    } else {
        throw ConfigError("scene: unknown path kind: " + kind);
    }
    return p;
}

const char* kinematic_kind_name(KinematicTemplate::Kind k) {
    switch (k) {
        case KinematicTemplate::Kind::chewing: return "chewing";
        case KinematicTemplate::Kind::intake: return "intake";
        case KinematicTemplate::Kind::drinking: return "drinking";
        case KinematicTemplate::Kind::talking: return "talking";
        case KinematicTemplate::Kind::face_touch: return "face_touch";
        case KinematicTemplate::Kind::null_drift: return "null_drift";
    }
    return "chewing";
}

KinematicTemplate::Kind kinematic_kind_from_name(const std::string& name) {
    using Kind = KinematicTemplate::Kind;
    if (name == "chewing") return Kind::chewing;
    if (name == "intake") return Kind::intake;
    if (name == "drinking") return Kind::drinking;
    if (name == "talking") return Kind::talking;
    if (name == "face_touch") return Kind::face_touch;
    if (name == "null_drift") return Kind::null_drift;
    throw ConfigError("script: unknown kinematics kind: " + name);
}

json kinematics_to_json(const KinematicTemplate& t) {
    using Kind = KinematicTemplate::Kind;
    json j;
    j["kind"] = kinematic_kind_name(t.kind);
    if (t.kind == Kind::chewing || t.kind == Kind::talking) {
        j["center_m"] = t.center_m;
        j["amplitude_m"] = t.amplitude_m;
        j["rate_hz"] = t.rate_hz;
        j["phase"] = t.phase;
    } else if (t.kind == Kind::null_drift) {
        j["waypoints"] = t.waypoints;
    } else {
        j["far_m"] = t.far_m;
        j["near_m"] = t.near_m;
        j["approach_s"] = t.approach_s;
        j["hold_s"] = t.hold_s;
        j["retreat_s"] = t.retreat_s;
        j["tremor_amplitude_m"] = t.tremor_amplitude_m;
        j["tremor_rate_hz"] = t.tremor_rate_hz;
        j["phase"] = t.phase;
    }
    return j;
}

KinematicTemplate kinematics_from_json(const json& j) {
    using Kind = KinematicTemplate::Kind;
    KinematicTemplate t = default_template(kinematic_kind_from_name(j.at("kind")));
    if (t.kind == Kind::chewing || t.kind == Kind::talking) {
        t.center_m = j.value("center_m", t.center_m);
        t.amplitude_m = j.value("amplitude_m", t.amplitude_m);
        t.rate_hz = j.value("rate_hz", t.rate_hz);
        t.phase = j.value("phase", t.phase);
    } else if (t.kind == Kind::null_drift) {
        if (j.contains("waypoints")) {
            t.waypoints.clear();
            for (const auto& pt : j.at("waypoints"))
                t.waypoints.emplace_back(pt.at(0).get<double>(), pt.at(1).get<double>());
        }
    } else {
        t.far_m = j.value("far_m", t.far_m);
        t.near_m = j.value("near_m", t.near_m);
        t.approach_s = j.value("approach_s", t.approach_s);
        t.hold_s = j.value("hold_s", t.hold_s);
        t.retreat_s = j.value("retreat_s", t.retreat_s);
        t.tremor_amplitude_m = j.value("tremor_amplitude_m", t.tremor_amplitude_m);
        t.tremor_rate_hz = j.value("tremor_rate_hz", t.tremor_rate_hz);
        t.phase = j.value("phase", t.phase);
    }
    return t;
}

json sensing_to_json(const signal::SensingConfig& s) {
    json bands = json::array();
    for (const auto& b : s.bands)
        bands.push_back({{"f_start", b.f_start},
                         {"f_end", b.f_end},
                         {"n_samples", b.n_samples},
                         {"amplitude", b.amplitude}});
    return {{"sample_rate", s.sample_rate},
            {"speed_of_sound", s.speed_of_sound},
            {"range_bins_full", s.range_bins_full},
            {"frames_per_second", s.frames_per_second},
            {"bands", bands}};
}

signal::SensingConfig sensing_from_json(const json& j) {
    signal::SensingConfig s = signal::SensingConfig::standard();
    s.sample_rate = j.value("sample_rate", s.sample_rate);
    s.speed_of_sound = j.value("speed_of_sound", s.speed_of_sound);
    s.range_bins_full = j.value("range_bins_full", s.range_bins_full);
    s.frames_per_second = j.value("frames_per_second", s.frames_per_second);
    if (j.contains("bands")) {
        const auto& bands = j.at("bands");
        if (bands.size() != 2) throw ConfigError("sensing: exactly two bands required");
        for (std::size_t i = 0; i < 2; ++i) {
            auto& b = s.bands[i];
            b.f_start = bands[i].value("f_start", b.f_start);
            b.f_end = bands[i].value("f_end", b.f_end);
            b.n_samples = bands[i].value("n_samples", b.n_samples);
            b.amplitude = bands[i].value("amplitude", b.amplitude);
            b.sample_rate = s.sample_rate;
        }
    } else {
        for (auto& b : s.bands) b.sample_rate = s.sample_rate;
    }
    return s;
}

json parse_json_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw DataError(std::string("cannot open ") + what + ": " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string(what) + ": invalid JSON in " + path + ": " + e.what());
    }
}

}  // namespace

std::string scene_to_json(const Scene& scene) {
    json j;
    j["seed"] = scene.seed;
    j["noise_rms"] = scene.noise_rms;
    j["actor"] = {{"reflectivity", scene.actor_reflectivity},
                  {"visible_to", visibility_to_json(scene.actor_visible_left, scene.actor_visible_right)}};
    json reflectors = json::array();
    for (const auto& r : scene.reflectors)
        reflectors.push_back({{"reflectivity", r.reflectivity},
                              {"visible_to", visibility_to_json(r.visible_left, r.visible_right)},
                              {"path", path_to_json(r.path)}});
    j["reflectors"] = std::move(reflectors);
    j["sensing"] = sensing_to_json(scene.sensing);
    return j.dump(2);
}

std::string script_to_json(const ActivityScript& script) {
    json entries = json::array();
    for (const auto& e : script.entries)
        entries.push_back({{"start_s", e.start_s},
                           {"end_s", e.end_s},
                           {"label", std::string(to_string(e.label))},
                           {"kinematics", kinematics_to_json(e.kinematics)}});
    json j;
    j["total_duration_s"] = script.total_duration_s;
    j["entries"] = std::move(entries);
    return j.dump(2);
}

Scene scene_from_json_file(const std::string& path) {
    const json j = parse_json_file(path, "scene");
    try {
        Scene scene;
        scene.seed = j.value("seed", std::uint64_t{0});
        scene.noise_rms = j.value("noise_rms", 0.0);
        if (j.contains("actor")) {
            const auto& a = j.at("actor");
            scene.actor_reflectivity = a.value("reflectivity", scene.actor_reflectivity);
            if (a.contains("visible_to"))
                visibility_from_json(a.at("visible_to"), scene.actor_visible_left, scene.actor_visible_right);
        }
        for (const auto& rj : j.value("reflectors", json::array())) {
            Reflector r;
            r.reflectivity = rj.value("reflectivity", 1.0);
            if (rj.contains("visible_to"))
                visibility_from_json(rj.at("visible_to"), r.visible_left, r.visible_right);
            r.path = path_from_json(rj.at("path"));
            scene.reflectors.push_back(std::move(r));
        }
        if (j.contains("sensing")) scene.sensing = sensing_from_json(j.at("sensing"));
        scene.validate();
        return scene;
    } catch (const json::exception& e) {
        throw ConfigError("scene: schema violation in " + path + ": " + e.what());
    }
}

ActivityScript script_from_json_file(const std::string& path) {
    const json j = parse_json_file(path, "script");
    try {
        ActivityScript script;
        script.total_duration_s = j.at("total_duration_s");
        for (const auto& ej : j.at("entries")) {
            ActivityEntry e;
            e.start_s = ej.at("start_s");
            e.end_s = ej.at("end_s");
            e.label = activity_from_string(ej.at("label").get<std::string>());
            e.kinematics = kinematics_from_json(ej.at("kinematics"));
            script.entries.push_back(std::move(e));
        }
        script.validate();
        return script;
    } catch (const json::exception& e) {
        throw ConfigError("script: schema violation in " + path + ": " + e.what());
    }
}

void save_scene_json(const std::string& path, const Scene& scene) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << scene_to_json(scene) << '\n';
}

void save_script_json(const std::string& path, const ActivityScript& script) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << script_to_json(script) << '\n';
}

}  // namespace dietsonar::sim
