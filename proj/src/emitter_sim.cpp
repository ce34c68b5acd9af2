#include "dlr/emitter_sim.hpp"

#include <cmath>

#include "dlr/error.hpp"
#include "dlr/rng.hpp"

namespace dlr {
namespace {

constexpr int kSamplesPerSymbol = 4;
constexpr int kRrcSpanSymbols = 8;
constexpr double kRrcRolloff = 0.35;
constexpr std::uint64_t kPreambleSeed = 0x5eed0beac0f5ULL;

double rrc_tap(double t, double beta) {
    // t in symbol units.
    if (std::abs(t) < 1e-12) return 1.0 + beta * (4.0 / kPi - 1.0);
    const double quarter = 1.0 / (4.0 * beta);
    if (std::abs(std::abs(t) - quarter) < 1e-9) {
        const double a = (1.0 + 2.0 / kPi) * std::sin(kPi / (4.0 * beta));
        const double b = (1.0 - 2.0 / kPi) * std::cos(kPi / (4.0 * beta));
        return beta / std::sqrt(2.0) * (a + b);
    }
    const double num = std::sin(kPi * t * (1.0 - beta)) +
                       4.0 * beta * t * std::cos(kPi * t * (1.0 + beta));
    const double den = kPi * t * (1.0 - 16.0 * beta * beta * t * t);
    return num / den;
}

const std::vector<double>& rrc_taps() {
    static const std::vector<double> taps = [] {
        const int half = kRrcSpanSymbols * kSamplesPerSymbol / 2;
        std::vector<double> h(2 * half + 1);
        for (int i = 0; i < static_cast<int>(h.size()); ++i)
            h[i] = rrc_tap(static_cast<double>(i - half) / kSamplesPerSymbol, kRrcRolloff);
        return h;
    }();
    return taps;
}

cplx qpsk_symbol(Rng& rng) {
    static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const std::uint64_t bits = rng.next() & 3;
    return {(bits & 1) ? inv_sqrt2 : -inv_sqrt2,
            (bits & 2) ? inv_sqrt2 : -inv_sqrt2};
}

// Linear interpolation with zero extension outside the sequence.
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

EmitterPopulation make_population(int count, double separation, std::uint64_t seed) {
    require(count >= 2, "invalid-population", "population needs at least 2 devices");
    require(separation > 0.0 && separation <= 1.0, "invalid-population",
            "separation must lie in (0, 1]");

    EmitterPopulation pop;
    pop.separation = separation;
    pop.seed = seed;
    pop.fingerprints.reserve(static_cast<std::size_t>(count));
    const FingerprintRanges& r = kFingerprintRanges;
    for (int id = 0; id < count; ++id) {
        Rng rng(derive_seed(seed, stream::fingerprint, static_cast<std::uint64_t>(id)));
        auto draw = [&](const ParamRange& pr) {
            return pr.center() + separation * pr.halfwidth() * (2.0 * rng.uniform() - 1.0);
        };
        DeviceFingerprint fp;
        fp.device_id = id;
        fp.cfo_ppm = draw(r.cfo_ppm);
        fp.tx_iq_gain_pct = draw(r.tx_iq_gain_pct);
        fp.tx_iq_phase_deg = draw(r.tx_iq_phase_deg);
        fp.pa_a3 = draw(r.pa_a3);
        fp.pa_a5 = draw(r.pa_a5);
        fp.transient_tau = draw(r.transient_tau);
        fp.transient_ring_freq = draw(r.transient_ring_freq);
        fp.transient_ring_amp = draw(r.transient_ring_amp);
        fp.clock_skew_ppm = draw(r.clock_skew_ppm);
        pop.fingerprints.push_back(fp);
    }
    return pop;
}

std::vector<cplx> make_payload(std::uint64_t payload_seed, std::size_t length) {
    require(length >= 1, "invalid-input", "payload length must be positive");
    const auto& h = rrc_taps();
    const std::size_t half = h.size() / 2;

    // Enough symbols to cover the burst plus the filter transient.
    const std::size_t n_sym = (length + h.size()) / kSamplesPerSymbol + 2;
    // Symbols feeding the first half of the burst are the fixed preamble.
    const std::size_t preamble_sym =
        (length / 2 + h.size()) / kSamplesPerSymbol + 2;

    Rng pre_rng(kPreambleSeed);
    Rng data_rng(payload_seed);
    std::vector<cplx> symbols(n_sym);
    for (std::size_t i = 0; i < n_sym; ++i)
        symbols[i] = qpsk_symbol(i < preamble_sym ? pre_rng : data_rng);

    // Upsample-and-filter; take length samples past the group delay.
    std::vector<cplx> out(length, cplx{0.0});
    for (std::size_t n = 0; n < length; ++n) {
        const std::size_t m0 = n + half; // position in the upsampled stream
        cplx acc = 0.0;
        // Only every kSamplesPerSymbol-th upsampled input is nonzero.
        std::size_t first = (m0 >= 2 * half) ? m0 - 2 * half : 0;
        std::size_t sym = (first + kSamplesPerSymbol - 1) / kSamplesPerSymbol;
        for (std::size_t m = sym * kSamplesPerSymbol; m <= m0; m += kSamplesPerSymbol, ++sym) {
            if (sym >= symbols.size()) break;
            acc += symbols[sym] * h[m0 - m];
        }
        out[n] = acc;
    }

    const double p = mean_power(out);
    if (p > 0.0) {
        const double scale = 1.0 / std::sqrt(p);
        for (auto& v : out) v *= scale;
    }
    return out;
}

Burst emit_burst(const DeviceFingerprint& fp, std::uint64_t payload_seed,
                 std::size_t length) {
    require(length >= 64, "invalid-input", "burst length must be at least 64");
    require(fp.transient_tau > 0.0, "invalid-input", "transient_tau must be positive");

    std::vector<cplx> x = make_payload(payload_seed, length);

    // Sample-clock skew: the DAC replays the payload a few ppm off-rate.
    if (fp.clock_skew_ppm != 0.0) {
        const double rate = 1.0 + fp.clock_skew_ppm * 1e-6;
        std::vector<cplx> skewed(length);
        for (std::size_t n = 0; n < length; ++n)
            skewed[n] = lerp_sample(x, static_cast<double>(n) * rate);
        x = std::move(skewed);
    }

    // Turn-on envelope with exponentially decaying ringing; n is 1-based so
    // the envelope tends to 1 everywhere as tau -> 0+.
    const double tau = fp.transient_tau;
    for (std::size_t i = 0; i < length; ++i) {
        const double n = static_cast<double>(i + 1);
        const double decay = std::exp(-n / tau);
        const double env = (1.0 - decay) *
            (1.0 + fp.transient_ring_amp * std::cos(kTwoPi * fp.transient_ring_freq * n) * decay);
        x[i] *= env;
    }

    // Transmit IQ imbalance: gain split across branches, phase skew on Q.
    {
        const double gi = 1.0 + fp.tx_iq_gain_pct / 200.0;
        const double gq = 1.0 - fp.tx_iq_gain_pct / 200.0;
        const double phi = fp.tx_iq_phase_deg * kPi / 180.0;
        const double c = std::cos(phi), s = std::sin(phi);
        for (auto& v : x) {
            const double i_new = gi * v.real();
            const double q_new = gq * (v.imag() * c + v.real() * s);
            v = {i_new, q_new};
        }
    }

    // Memoryless odd-order PA distortion.
    if (fp.pa_a3 != 0.0 || fp.pa_a5 != 0.0) {
        for (auto& v : x) {
            const double m2 = std::norm(v);
            v *= 1.0 + fp.pa_a3 * m2 + fp.pa_a5 * m2 * m2;
        }
    }

    // Carrier frequency offset.
    const double cfo = fp.cfo_cycles_per_sample();
    if (cfo != 0.0) {
        for (std::size_t i = 0; i < length; ++i)
            x[i] *= std::polar(1.0, kTwoPi * cfo * static_cast<double>(i + 1));
    }

    // Power control: steady-state portion (n > 5*tau, 1-based) at unit mean power.
    std::size_t steady = static_cast<std::size_t>(std::floor(5.0 * tau));
    if (steady > length / 2) steady = 0; // degenerate tau, use the whole burst
    double p = mean_power(std::span<const cplx>(x).subspan(steady));
    if (p > 0.0) {
        const double scale = 1.0 / std::sqrt(p);
        for (auto& v : x) v *= scale;
    }

    Burst burst;
    burst.samples = std::move(x);
    burst.label = fp.device_id;
    return burst;
}

std::optional<std::size_t> detect_rising_edge(std::span<const cplx> stream,
                                              double threshold) {
    require(!stream.empty(), "invalid-input", "empty stream");
    require(threshold > 0.0, "invalid-input", "threshold must be positive");

    const std::size_t floor_span = std::min(detail::kNoiseFloorSpan, stream.size());
    double floor_acc = 0.0;
    for (std::size_t i = 0; i < floor_span; ++i) floor_acc += std::norm(stream[i]);
    const double noise_floor = floor_acc / static_cast<double>(floor_span);

    const std::size_t w = detail::kEdgeWindow;
    if (stream.size() < w) return std::nullopt;

    double acc = 0.0;
    for (std::size_t i = 0; i < w; ++i) acc += std::norm(stream[i]);
    const double wd = static_cast<double>(w);
    if (acc / wd > threshold * noise_floor) return w - 1;
    for (std::size_t n = w; n < stream.size(); ++n) {
        acc += std::norm(stream[n]) - std::norm(stream[n - w]);
        if (acc / wd > threshold * noise_floor) return n;
    }
    return std::nullopt;
}

Burst extract_burst(std::span<const cplx> stream, std::size_t start, std::size_t len) {
    require(start + len <= stream.size() && len > 0, "bounds-error",
            "burst slice out of range");
    Burst burst;
    burst.samples.assign(stream.begin() + static_cast<std::ptrdiff_t>(start),
                         stream.begin() + static_cast<std::ptrdiff_t>(start + len));
    return burst;
}

} // namespace dlr
