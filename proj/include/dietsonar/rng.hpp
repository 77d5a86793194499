#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace dietsonar {

// Counter-based deterministic RNG. Every draw is a pure hash of
// (seed, stream, counter), so values do not depend on evaluation order or
// thread count, and identical seeds reproduce bit-identical results across
// runs. Streams separate independent uses (noise, shuffling, dropout, ...).
class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::uint64_t stream)
        : base_(mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ mix(stream))) {}

    RandomStream(std::uint64_t seed, std::string_view stream_name)
        : RandomStream(seed, hash_name(stream_name)) {}

    std::uint64_t bits(std::uint64_t counter) const { return mix(base_ ^ mix(counter + 0x632be59bd9b4e019ULL)); }

    // Uniform in [0, 1).
    double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_int(std::uint64_t counter, std::uint64_t n) const {
        return static_cast<std::uint64_t>(uniform(counter) * static_cast<double>(n)) % n;
    }

    // Standard normal via Box-Muller; consumes counters 2k and 2k+1.
    double gaussian(std::uint64_t counter) const {
        const double u1 = uniform(2 * counter);
        const double u2 = uniform(2 * counter + 1);
        const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

    static std::uint64_t hash_name(std::string_view name) {
        std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
        for (const char c : name) {
            h ^= static_cast<std::uint8_t>(c);
            h *= 0x100000001b3ULL;
        }
        return h;
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {  // splitmix64 finalizer
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t base_;
};

// Stateful convenience wrapper for inherently sequential uses (shuffles).
class SequentialRng {
  public:
    SequentialRng(std::uint64_t seed, std::string_view stream_name) : stream_(seed, stream_name) {}

    std::uint64_t next_bits() { return stream_.bits(counter_++); }
    double next_uniform() { return stream_.uniform(counter_++); }
    std::uint64_t next_int(std::uint64_t n) { return stream_.uniform_int(counter_++, n); }

  private:
    RandomStream stream_;
    std::uint64_t counter_ = 0;
};

template <typename T>
void seeded_shuffle(std::vector<T>& items, std::uint64_t seed, std::string_view stream_name) {
    SequentialRng rng(seed, stream_name);
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_int(i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace dietsonar
