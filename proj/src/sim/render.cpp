#include "dietsonar/sim/render.hpp"

#include <cmath>

#include "dietsonar/parallel.hpp"
#include "dietsonar/rng.hpp"
#include "dietsonar/signal/chirp.hpp"

namespace dietsonar::sim {

namespace {

constexpr double kMinGainRange = 0.05;   // attenuation floor
constexpr double kMinValidRange = 0.02;  // below this the trajectory is rejected
constexpr std::int64_t kRenderChunk = 1 << 16;

double checked_range(double r, const signal::SensingConfig& sensing) {
    if (!(r > kMinValidRange) || r > sensing.max_range_m())
        throw DataError("render: trajectory range outside (0.02, max_range]");
    return r;
}

double echo_gain(double range, double reflectivity) {
    const double r = std::max(range, kMinGainRange);
    return reflectivity / (r * r);
}

}  // namespace

std::vector<double> delay_and_attenuate(const ChirpTrain& tx,
                                        const std::function<double(double)>& range_at,
                                        double reflectivity, const signal::SensingConfig& sensing,
                                        double duration_s) {
    if (tx.period.empty() || tx.sample_rate <= 0.0) throw ArgumentError("delay_and_attenuate: empty train");
    const double fs = tx.sample_rate;
    const auto n = static_cast<std::int64_t>(std::llround(duration_s * fs));
    const double delay_scale = 2.0 * fs / sensing.speed_of_sound;
    std::vector<double> out(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / fs;
        const double r = checked_range(range_at(t), sensing);
        const double pos = static_cast<double>(k) - r * delay_scale;
        out[static_cast<std::size_t>(k)] = echo_gain(r, reflectivity) * tx.value_at(pos);
    }
    return out;
}

RenderResult render_scene(const Scene& scene, const ActivityScript& script) {
    scene.validate();
    script.validate();
    if (script.total_duration_s < 1.0) throw ArgumentError("render: script must cover at least 1 s");

    const auto& sensing = scene.sensing;
    const double fs = sensing.sample_rate;
    const auto n = static_cast<std::int64_t>(std::llround(script.total_duration_s * fs));

    std::array<ChirpTrain, 2> trains;
    for (int b = 0; b < 2; ++b) trains[b] = {signal::generate_chirp(sensing.bands[b]), fs};

    // Fixed contributor list: actor first, then scene reflectors in order.
    struct Contributor {
        std::function<double(double)> range_at;
        double reflectivity;
        bool visible[2];
    };
    std::vector<Contributor> contributors;
    if (scene.actor_reflectivity > 0.0) {
        contributors.push_back({[&script](double t) { return script.actor_range_at(t); },
                                scene.actor_reflectivity,
                                {scene.actor_visible_left, scene.actor_visible_right}});
    }
    for (const auto& refl : scene.reflectors) {
        contributors.push_back({[&refl](double t) { return refl.path.range_at(t); },
                                refl.reflectivity,
                                {refl.visible_left, refl.visible_right}});
    }

    RenderResult result;
    result.audio.sample_rate = fs;
    result.audio.channels.assign(2, std::vector<float>(static_cast<std::size_t>(n), 0.0f));
    result.truth.labels = script.labels_per_second();

    const double delay_scale = 2.0 * fs / sensing.speed_of_sound;
    for (int mic = 0; mic < 2; ++mic) {
        const RandomStream noise(scene.seed, RandomStream::hash_name("render-noise") + static_cast<std::uint64_t>(mic));
        float* out = result.audio.channels[static_cast<std::size_t>(mic)].data();
        parallel_chunks(n, kRenderChunk, [&](std::int64_t, std::int64_t begin, std::int64_t end) {
            std::vector<double> accum(static_cast<std::size_t>(end - begin), 0.0);
            std::vector<double> range(static_cast<std::size_t>(end - begin));
            for (const auto& contrib : contributors) {
                if (!contrib.visible[mic]) continue;
                for (std::int64_t k = begin; k < end; ++k)
                    range[static_cast<std::size_t>(k - begin)] =
                        checked_range(contrib.range_at(static_cast<double>(k) / fs), sensing);
                for (const auto& train : trains) {
                    for (std::int64_t k = begin; k < end; ++k) {
                        const double r = range[static_cast<std::size_t>(k - begin)];
                        const double pos = static_cast<double>(k) - r * delay_scale;
                        accum[static_cast<std::size_t>(k - begin)] +=
                            echo_gain(r, contrib.reflectivity) * train.value_at(pos);
                    }
                }
            }
            if (scene.noise_rms > 0.0) {
                for (std::int64_t k = begin; k < end; ++k)
                    accum[static_cast<std::size_t>(k - begin)] +=
                        scene.noise_rms * noise.gaussian(static_cast<std::uint64_t>(k));
            }
            for (std::int64_t k = begin; k < end; ++k)
                out[k] = static_cast<float>(accum[static_cast<std::size_t>(k - begin)]);
        });
    }
    return result;
}

}  // namespace dietsonar::sim
