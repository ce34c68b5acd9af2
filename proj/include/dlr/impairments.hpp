#pragma once

#include <array>
#include <utility>
#include <vector>

#include "dlr/rng.hpp"
#include "dlr/types.hpp"

namespace dlr {

// Channel/receiver impairment class T_i. All bounds are linear in the index:
//   t = 25i, p = 0.25i, f = 0.075i, b = 0.6 - 0.1i, r = 1 + 0.625i,
//   snr = 50 - 12.5i dB, Ia = 0.75i %, Ip = 0.25i deg, Id = 0.025i.
struct ImpairmentSpec {
    int index = 0;
    int t_max = 0;                // max |time error| in samples
    double p_max = 0.0;           // max |phase rotation| in radians
    double f_max = 0.0;           // max |frequency shift| in DFT bins
    double b_coh = 0.6;           // coherence bandwidth upper bound, normalized
    double r_max = 1.0;           // max resampling factor
    double snr_db = 50.0;
    double iq_amp_max_pct = 0.0;  // receive IQ gain mismatch bound, percent
    double iq_phase_max_deg = 0.0;
    double iq_dc_max = 0.0;       // DC bias bound relative to RMS
};

ImpairmentSpec spec_from_index(int i);

// Three-tap Rayleigh channel with flat {1,1,1} power-delay profile, jointly
// normalized so the expected output power equals the input power.
struct FadingRealization {
    std::array<cplx, 3> taps{};
    std::array<int, 3> delays{};
};

FadingRealization rayleigh_channel(double b_coh, Rng& rng);

// All per-burst random draws of the impairment chain, separated from the
// application so tests can freeze them. Draw order: fading (skipped at i=0),
// resample factor, frequency shift, phase, time shift, IQ gain, IQ phase,
// DC magnitude, DC angle. AWGN is drawn during application.
struct ChannelDraws {
    bool fading_enabled = false;
    FadingRealization fading{};
    double resample_factor = 1.0;
    double freq_shift_bins = 0.0;
    double phase_rad = 0.0;
    int time_shift = 0;
    double iq_eps_pct = 0.0;
    double iq_phase_deg = 0.0;
    double dc_mag = 0.0;   // relative to RMS
    double dc_angle = 0.0;
};

ChannelDraws draw_params(const ImpairmentSpec& spec, Rng& rng);

// Fixed-order chain: fading, resampling, frequency shift, phase rotation,
// circular time shift, receive IQ imbalance + DC bias, AWGN to exact snr_db
// relative to the post-chain signal power. `rng` supplies only the noise.
Burst apply_with_draws(const Burst& burst, const ImpairmentSpec& spec,
                       const ChannelDraws& draws, Rng& rng);

Burst apply(const Burst& burst, const ImpairmentSpec& spec, Rng& rng);

// AWGN with variance split evenly across I and Q. +inf snr returns the input.
Burst add_awgn(const Burst& burst, double snr_db, Rng& rng);

// Shifts each jammer by an independent uniform delay in [0, max_delay]
// (zero-filled, truncated at the burst end), sums them, and scales the sum so
// jamming energy / signal energy hits jsr_db exactly. Returns the jammed
// burst and the achieved JSR in dB.
std::pair<Burst, double> superpose_jammers(const Burst& signal,
                                           const std::vector<Burst>& jammers,
                                           double jsr_db, int max_delay, Rng& rng);

} // namespace dlr
