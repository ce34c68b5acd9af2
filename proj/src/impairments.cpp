#include "dlr/impairments.hpp"

#include <cmath>
#include <limits>

#include "dlr/error.hpp"

namespace dlr {
namespace {

cplx lerp_sample(const std::vector<cplx>& x, double pos) {
    if (pos < 0.0) return 0.0;
    const auto i0 = static_cast<std::size_t>(pos);
    if (i0 >= x.size()) return 0.0;
    const double frac = pos - static_cast<double>(i0);
    if (frac == 0.0) return x[i0];
    const cplx right = (i0 + 1 < x.size()) ? x[i0 + 1] : cplx{0.0};
    return x[i0] * (1.0 - frac) + right * frac;
}

} // namespace

ImpairmentSpec spec_from_index(int i) {
    require(i >= 0 && i <= 4, "invalid-class", "impairment index must be 0..4");
    ImpairmentSpec s;
    s.index = i;
    s.t_max = 25 * i;
    s.p_max = 0.25 * i;
    s.f_max = 0.075 * i;
    s.b_coh = 0.6 - 0.1 * i;
    s.r_max = 1.0 + 0.625 * i;
    s.snr_db = 50.0 - 12.5 * i;
    s.iq_amp_max_pct = 0.75 * i;
    s.iq_phase_max_deg = 0.25 * i;
    s.iq_dc_max = 0.025 * i;
    return s;
}

FadingRealization rayleigh_channel(double b_coh, Rng& rng) {
    require(b_coh > 0.0 && b_coh <= 1.0, "invalid-input",
            "coherence bandwidth must lie in (0, 1]");
    // B uniform in (b_coh/2, b_coh]; delay spread via B_c = 1/(5 sigma_tau).
    const double b = b_coh - 0.5 * b_coh * rng.uniform();
    const int d = static_cast<int>(std::ceil(1.0 / (5.0 * b)));
    FadingRealization fr;
    fr.delays = {0, d, 2 * d};
    const double scale = 1.0 / std::sqrt(3.0);
    for (auto& tap : fr.taps) tap = rng.complex_normal() * scale;
    return fr;
}

ChannelDraws draw_params(const ImpairmentSpec& spec, Rng& rng) {
    ChannelDraws d;
    d.fading_enabled = spec.index != 0;
    if (d.fading_enabled) d.fading = rayleigh_channel(spec.b_coh, rng);
    d.resample_factor = rng.uniform(1.0, spec.r_max);
    d.freq_shift_bins = rng.uniform(-spec.f_max, spec.f_max);
    d.phase_rad = rng.uniform(-spec.p_max, spec.p_max);
    d.time_shift = static_cast<int>(rng.uniform_int(-spec.t_max, spec.t_max));
    d.iq_eps_pct = rng.uniform(0.0, spec.iq_amp_max_pct);
    d.iq_phase_deg = rng.uniform(0.0, spec.iq_phase_max_deg);
    d.dc_mag = rng.uniform(0.0, spec.iq_dc_max);
    d.dc_angle = rng.uniform(0.0, kTwoPi);
    return d;
}

Burst apply_with_draws(const Burst& burst, const ImpairmentSpec& spec,
                       const ChannelDraws& draws, Rng& rng) {
    const std::size_t n = burst.samples.size();
    require(n > 0, "invalid-input", "empty burst");
    std::vector<cplx> x = burst.samples;

    // (1) fading: linear convolution with the tapped delay line.
    if (draws.fading_enabled) {
        std::vector<cplx> y(n, cplx{0.0});
        for (std::size_t k = 0; k < draws.fading.taps.size(); ++k) {
            const int delay = draws.fading.delays[k];
            const cplx g = draws.fading.taps[k];
            for (std::size_t i = static_cast<std::size_t>(delay); i < n; ++i)
                y[i] += g * x[i - static_cast<std::size_t>(delay)];
        }
        x = std::move(y);
    }

    // (2) resampling: stretch by the drawn factor, truncated to length.
    if (draws.resample_factor != 1.0) {
        std::vector<cplx> y(n);
        for (std::size_t i = 0; i < n; ++i)
            y[i] = lerp_sample(x, static_cast<double>(i) / draws.resample_factor);
        x = std::move(y);
    }

    // (3) frequency shift in DFT-bin units.
    if (draws.freq_shift_bins != 0.0) {
        const double step = kTwoPi * draws.freq_shift_bins / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i)
            x[i] *= std::polar(1.0, step * static_cast<double>(i));
    }

    // (4) phase rotation.
    if (draws.phase_rad != 0.0) {
        const cplx rot = std::polar(1.0, draws.phase_rad);
        for (auto& v : x) v *= rot;
    }

    // (5) time error as circular shift.
    if (draws.time_shift != 0) {
        std::vector<cplx> y(n);
        const auto ni = static_cast<std::ptrdiff_t>(n);
        for (std::ptrdiff_t i = 0; i < ni; ++i) {
            std::ptrdiff_t src = (i - draws.time_shift) % ni;
            if (src < 0) src += ni;
            y[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(src)];
        }
        x = std::move(y);
    }

    // (6) receive IQ imbalance and complex DC bias relative to RMS.
    {
        const double gi = 1.0 + draws.iq_eps_pct / 200.0;
        const double gq = 1.0 - draws.iq_eps_pct / 200.0;
        const double phi = draws.iq_phase_deg * kPi / 180.0;
        const double c = std::cos(phi), s = std::sin(phi);
        for (auto& v : x) {
            const double i_new = gi * v.real();
            const double q_new = gq * (v.imag() * c + v.real() * s);
            v = {i_new, q_new};
        }
        if (draws.dc_mag != 0.0) {
            const double rms = std::sqrt(mean_power(x));
            const cplx dc = std::polar(draws.dc_mag * rms, draws.dc_angle);
            for (auto& v : x) v += dc;
        }
    }

    // (7) AWGN relative to the post-chain signal power.
    Burst out;
    out.samples = std::move(x);
    out.sample_rate_hz = burst.sample_rate_hz;
    out.label = burst.label;
    return add_awgn(out, spec.snr_db, rng);
}

Burst apply(const Burst& burst, const ImpairmentSpec& spec, Rng& rng) {
    const ChannelDraws draws = draw_params(spec, rng);
    return apply_with_draws(burst, spec, draws, rng);
}

Burst add_awgn(const Burst& burst, double snr_db, Rng& rng) {
    if (std::isinf(snr_db) && snr_db > 0) return burst;
    Burst out = burst;
    const double p = mean_power(out.samples);
    const double var = p / std::pow(10.0, snr_db / 10.0);
    const double sigma = std::sqrt(var / 2.0);
    for (auto& v : out.samples)
        v += cplx{sigma * rng.normal(), sigma * rng.normal()};
    return out;
}

std::pair<Burst, double> superpose_jammers(const Burst& signal,
                                           const std::vector<Burst>& jammers,
                                           double jsr_db, int max_delay, Rng& rng) {
    require(!jammers.empty(), "invalid-input", "jammer list is empty");
    require(max_delay >= 0, "invalid-input", "max_delay must be nonnegative");
    const std::size_t n = signal.samples.size();

    std::vector<cplx> jam(n, cplx{0.0});
    for (const Burst& j : jammers) {
        const auto delay = static_cast<std::size_t>(rng.uniform_int(0, max_delay));
        const std::size_t count = (delay < n) ? std::min(j.samples.size(), n - delay) : 0;
        for (std::size_t i = 0; i < count; ++i) jam[delay + i] += j.samples[i];
    }

    const double e_sig = energy(signal.samples);
    const double e_jam = energy(jam);
    const bool silent = std::isinf(jsr_db) && jsr_db < 0;
    if (e_jam <= 0.0) {
        if (silent) return {signal, -std::numeric_limits<double>::infinity()};
        fail("degenerate-jammer", "jammer sum has zero energy");
    }

    Burst out = signal;
    if (silent) return {out, -std::numeric_limits<double>::infinity()};

    const double scale = std::sqrt(std::pow(10.0, jsr_db / 10.0) * e_sig / e_jam);
    double e_scaled = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const cplx s = jam[i] * scale;
        e_scaled += std::norm(s);
        out.samples[i] += s;
    }
    const double achieved = 10.0 * std::log10(e_scaled / e_sig);
    return {out, achieved};
}

} // namespace dlr
