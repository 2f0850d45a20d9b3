#pragma once

#include <cassert>
#include <cstdint>
#include <random>
#include <string_view>

namespace rcpotts {

// 64-bit mixers used for seed derivation.  All randomness in the library flows
// from a single master seed through named sub-streams, so a run is fully
// determined by (master seed, stream names, draw order).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// Seedable, splittable random stream.  Sub-streams are derived from the
// stream's identity (not from its engine state), so splitting commutes with
// drawing.  Draw primitives avoid std::uniform_*_distribution on purpose:
// their output is implementation-defined, and we promise byte-identical
// reruns for equal seeds.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed)
        : id_(seed), eng_(splitmix64(seed ^ 0x6a09e667f3bcc909ull)) {}

    std::uint64_t id() const { return id_; }

    RngStream substream(std::string_view name) const {
        return RngStream(splitmix64(id_ ^ fnv1a64(name)));
    }
    RngStream substream(std::uint64_t index) const {
        return RngStream(splitmix64(id_ ^ (0x9e3779b97f4a7c15ull * (index + 1))));
    }
    RngStream substream(std::string_view name, std::uint64_t index) const {
        return substream(name).substream(index);
    }

    std::uint64_t u64() { return eng_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // Uniform integer in [0, n).  Rejection sampling; exact for any n >= 1.
    std::int64_t uniform_int(std::int64_t n) {
        assert(n >= 1);
        const std::uint64_t un = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
        std::uint64_t x;
        do {
            x = u64();
        } while (x >= limit);
        return static_cast<std::int64_t>(x % un);
    }

    // Fisher-Yates shuffle using uniform_int; deterministic given the stream.
    template <class Vec>
    void shuffle(Vec& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_int(static_cast<std::int64_t>(i)));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Escape hatch for test code that wants std:: distributions.
    std::mt19937_64& engine() { return eng_; }

  private:
    std::uint64_t id_;
    std::mt19937_64 eng_;
};

}  // namespace rcpotts
