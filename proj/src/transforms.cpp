#include "dlr/transforms.hpp"

#include <cmath>

#include "dlr/error.hpp"
#include "dlr/fft.hpp"

namespace dlr {

const char* to_string(TransformTag tag) {
    switch (tag) {
        case TransformTag::amplitude: return "amplitude";
        case TransformTag::fft_amp: return "fft_amp";
        case TransformTag::diff_fft: return "diff_fft";
        case TransformTag::dec_dft: return "dec_dft";
        case TransformTag::kay_freq: return "kay_freq";
    }
    return "unknown";
}

TransformTag transform_from_string(const std::string& name) {
    if (name == "amplitude") return TransformTag::amplitude;
    if (name == "fft_amp") return TransformTag::fft_amp;
    if (name == "diff_fft") return TransformTag::diff_fft;
    if (name == "dec_dft") return TransformTag::dec_dft;
    if (name == "kay_freq") return TransformTag::kay_freq;
    fail("invalid-config", "unknown transform: " + name);
}

Datapoint amplitude(const Burst& burst) {
    Datapoint dp;
    dp.tag = TransformTag::amplitude;
    dp.label = burst.label;
    dp.values.reserve(burst.samples.size());
    for (const cplx& v : burst.samples) dp.values.push_back(std::abs(v));
    return dp;
}

Datapoint fft_amplitude(const Burst& burst) {
    require(is_power_of_two(burst.samples.size()), "size-error",
            "fft_amplitude needs a power-of-two burst length");
    std::vector<cplx> spec = burst.samples;
    fft_inplace(spec);
    Datapoint dp;
    dp.tag = TransformTag::fft_amp;
    dp.label = burst.label;
    dp.values.reserve(spec.size());
    for (const cplx& v : spec) dp.values.push_back(std::abs(v));
    return dp;
}

Datapoint differential_fft(const Burst& burst) {
    const std::size_t n = burst.samples.size();
    require(n >= 2, "size-error", "differential_fft needs at least 2 samples");
    Burst diff;
    diff.label = burst.label;
    diff.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        diff.samples[i] = burst.samples[(i + 1) % n] - burst.samples[i];
    Datapoint dp = fft_amplitude(diff);
    dp.tag = TransformTag::diff_fft;
    return dp;
}

Datapoint decimated_dft(const Burst& burst, int d) {
    const std::size_t n = burst.samples.size();
    require(d >= 1 && n % static_cast<std::size_t>(d) == 0, "size-error",
            "decimation factor must divide the burst length");
    const std::size_t m = n / static_cast<std::size_t>(d);
    Datapoint dp;
    dp.tag = TransformTag::dec_dft;
    dp.label = burst.label;
    dp.dec_factor = d;
    dp.values.reserve(n);
    std::vector<cplx> phase(m);
    for (int p = 0; p < d; ++p) {
        for (std::size_t i = 0; i < m; ++i)
            phase[i] = burst.samples[static_cast<std::size_t>(p) + i * static_cast<std::size_t>(d)];
        const std::vector<cplx> spec = dft(phase);
        for (const cplx& v : spec) dp.values.push_back(std::abs(v));
    }
    return dp;
}

Datapoint kay_frequency(const Burst& burst, int window) {
    const std::size_t n = burst.samples.size();
    require(window >= 2, "invalid-input", "Kay window must be at least 2");
    const auto w = static_cast<std::size_t>(window);
    require(n >= w, "size-error", "burst shorter than the Kay window");

    // Parabolic Kay weights over the window's w-1 phase differences; they sum
    // to one, so a noise-free tone is estimated exactly.
    const double wd = static_cast<double>(w);
    std::vector<double> weights(w - 1);
    for (std::size_t m = 1; m < w; ++m) {
        const double md = static_cast<double>(m);
        weights[m - 1] = 6.0 * md * (wd - md) / (wd * (wd * wd - 1.0));
    }

    Datapoint dp;
    dp.tag = TransformTag::kay_freq;
    dp.label = burst.label;
    dp.values.assign(n, 0.0);
    for (std::size_t pos = 0; pos + w <= n; ++pos) {
        double acc = 0.0;
        for (std::size_t m = 1; m < w; ++m)
            acc += weights[m - 1] * std::arg(burst.samples[pos + m] * std::conj(burst.samples[pos + m - 1]));
        dp.values[pos] = acc / kTwoPi;
    }
    return dp;
}

std::vector<Datapoint> split(const Datapoint& dp, int k) {
    const std::size_t n = dp.values.size();
    require(k >= 1 && n % static_cast<std::size_t>(k) == 0, "size-error",
            "split count must divide the datapoint length");
    const std::size_t piece = n / static_cast<std::size_t>(k);
    std::vector<Datapoint> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        Datapoint slice;
        slice.tag = dp.tag;
        slice.label = dp.label;
        slice.dec_factor = dp.dec_factor;
        const auto begin = dp.values.begin() + static_cast<std::ptrdiff_t>(piece * static_cast<std::size_t>(j));
        slice.values.assign(begin, begin + static_cast<std::ptrdiff_t>(piece));
        out.push_back(std::move(slice));
    }
    return out;
}

std::vector<Datapoint> pad_and_split(const Datapoint& dp, int k) {
    require(k >= 1, "size-error", "split count must be positive");
    const std::size_t n = dp.values.size();
    const auto ku = static_cast<std::size_t>(k);
    const std::size_t rem = n % ku;
    if (rem == 0) return split(dp, k);
    Datapoint padded = dp;
    padded.values.resize(n + (ku - rem), 0.0);
    return split(padded, k);
}

} // namespace dlr
