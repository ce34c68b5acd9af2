#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "dlr/types.hpp"

namespace dlr {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Documented seed split rule: every independent random stream is keyed by
// (master seed, stream tag, index). Per-burst streams derived this way make
// results independent of evaluation order and thread schedule.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index = 0) {
    std::uint64_t s = master;
    s ^= splitmix64(s) + 0x9e3779b97f4a7c15ULL * (stream + 1);
    s ^= splitmix64(s) + 0xd1b54a32d192ed03ULL * (index + 1);
    return splitmix64(s);
}

// Stream tags used across the pipeline. Kept in one place so dataset
// generation, impairment application and evaluation never collide.
namespace stream {
inline constexpr std::uint64_t fingerprint = 1;
inline constexpr std::uint64_t payload_train = 2;
inline constexpr std::uint64_t payload_test = 3;
inline constexpr std::uint64_t payload_jammer = 4;
inline constexpr std::uint64_t impair_train = 5;
inline constexpr std::uint64_t impair_filter = 6;
inline constexpr std::uint64_t impair_threshold = 7;
inline constexpr std::uint64_t impair_eval = 8;    // + 16 * test impairment index
inline constexpr std::uint64_t bank_pick = 9;
inline constexpr std::uint64_t mask = 10;
inline constexpr std::uint64_t jam = 11;           // + 16 * jsr point index
inline constexpr std::uint64_t jam_signal = 12;
inline constexpr std::uint64_t loop_noise = 13;
} // namespace stream

// Deterministic xoshiro256++ generator. Distributions are hand-rolled so that
// byte-identical results do not depend on the standard library in use.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : state_) w = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Inclusive integer range, rejection-sampled to avoid modulo bias.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(next()); // full range
        const std::uint64_t limit =
            std::numeric_limits<std::uint64_t>::max() -
            std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t r;
        do { r = next(); } while (r >= limit);
        return lo + static_cast<std::int64_t>(r % span);
    }

    // Standard normal via Box-Muller. 1-u keeps the log argument in (0, 1].
    double normal() {
        const double u = 1.0 - uniform();
        const double v = uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(kTwoPi * v);
    }

    // Circularly symmetric complex normal with E|z|^2 = 1.
    cplx complex_normal() {
        const double u = 1.0 - uniform();
        const double v = uniform();
        return std::polar(std::sqrt(-std::log(u)), kTwoPi * v);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

} // namespace dlr
