#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dlr/types.hpp"

namespace dlr {

// Per-device transmitter impairment parameters. Together they form the RF
// signature the classifier has to learn.
struct DeviceFingerprint {
    int device_id = 0;
    double cfo_ppm = 0.0;            // carrier frequency offset, ppm of nominal carrier
    double tx_iq_gain_pct = 0.0;     // transmit I/Q amplitude imbalance, percent
    double tx_iq_phase_deg = 0.0;    // transmit I/Q phase imbalance, degrees
    double pa_a3 = 0.0;              // odd-order PA polynomial coefficients
    double pa_a5 = 0.0;
    double transient_tau = 1e-9;     // turn-on envelope time constant, samples
    double transient_ring_freq = 0.0; // turn-on ringing frequency, cycles/sample
    double transient_ring_amp = 0.0; // ringing amplitude, fraction of steady envelope
    double clock_skew_ppm = 0.0;     // sample-clock skew, ppm

    // CFO in cycles per sample at the nominal carrier and sample rate.
    double cfo_cycles_per_sample() const {
        return cfo_ppm * 1e-6 * kNominalCarrierHz / kSampleRateHz;
    }
};

struct ParamRange {
    double lo, hi;
    double center() const { return 0.5 * (lo + hi); }
    double halfwidth() const { return 0.5 * (hi - lo); }
};

// Full-scale fingerprint ranges at separation = 1. A population drawn with
// separation s keeps every parameter within s * halfwidth of the center.
struct FingerprintRanges {
    ParamRange cfo_ppm{-20.0, 20.0};
    ParamRange tx_iq_gain_pct{0.0, 2.0};
    ParamRange tx_iq_phase_deg{0.0, 2.0};
    ParamRange pa_a3{-0.2, 0.2};
    ParamRange pa_a5{-0.05, 0.05};
    ParamRange transient_tau{10.0, 60.0};
    ParamRange transient_ring_freq{0.01, 0.1};
    ParamRange transient_ring_amp{0.0, 0.3};
    ParamRange clock_skew_ppm{-10.0, 10.0};
};

inline constexpr FingerprintRanges kFingerprintRanges{};

struct EmitterPopulation {
    std::vector<DeviceFingerprint> fingerprints;
    double separation = 1.0;
    std::uint64_t seed = 0;
};

// Draws `count` fingerprints with device ids 0..count-1. Each parameter is
// uniform within separation * halfwidth of its range center. Deterministic
// per (count, separation, seed); fingerprints depend only on (seed, id).
EmitterPopulation make_population(int count, double separation, std::uint64_t seed);

// Unit-power QPSK baseband at 4 samples/symbol with root-raised-cosine
// shaping (roll-off 0.35). The symbols covering the first half of the burst
// come from a fixed beacon-like preamble shared by all devices and seeds;
// the rest are random per payload_seed. The shared preamble is what gives a
// device a stable average turn-on signature to match against.
std::vector<cplx> make_payload(std::uint64_t payload_seed, std::size_t length);

// Emitted burst: turn-on envelope, transmit IQ imbalance, PA polynomial
// x + a3*x|x|^2 + a5*x|x|^4, CFO rotation, then power-controlled so the
// steady-state portion has unit mean power.
Burst emit_burst(const DeviceFingerprint& fp, std::uint64_t payload_seed,
                 std::size_t length = 1024);

// Smallest index n at which the trailing 16-sample mean power first exceeds
// threshold times the noise floor estimated from the first 64 samples.
std::optional<std::size_t> detect_rising_edge(std::span<const cplx> stream,
                                              double threshold);

// Exact slice [start, start+len) of the stream.
Burst extract_burst(std::span<const cplx> stream, std::size_t start, std::size_t len);

namespace detail {
// Moving-average window and noise-floor span of the edge detector.
inline constexpr std::size_t kEdgeWindow = 16;
inline constexpr std::size_t kNoiseFloorSpan = 64;
} // namespace detail

} // namespace dlr
