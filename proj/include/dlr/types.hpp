#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace dlr {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Receiver front end assumed by the emitter simulator: complex baseband at
// 100 Msps centered in the 2.4 GHz ISM band.
inline constexpr double kSampleRateHz = 100e6;
inline constexpr double kNominalCarrierHz = 2.45e9;

// Fixed-length slice of complex baseband samples with an optional device label.
struct Burst {
    std::vector<cplx> samples;
    double sample_rate_hz = kSampleRateHz;
    std::optional<int> label;

    std::size_t size() const noexcept { return samples.size(); }
};

inline double mean_power(std::span<const cplx> x) {
    if (x.empty()) return 0.0;
    double acc = 0.0;
    for (const cplx& v : x) acc += std::norm(v);
    return acc / static_cast<double>(x.size());
}

inline double energy(std::span<const cplx> x) {
    double acc = 0.0;
    for (const cplx& v : x) acc += std::norm(v);
    return acc;
}

} // namespace dlr
