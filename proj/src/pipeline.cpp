#include "dlr/pipeline.hpp"

#include <cmath>

#include "dlr/error.hpp"

namespace dlr {

Datapoint apply_transform(const Burst& burst, TransformTag tag, int dec_factor,
                          int kay_window) {
    switch (tag) {
        case TransformTag::amplitude: return amplitude(burst);
        case TransformTag::fft_amp: return fft_amplitude(burst);
        case TransformTag::diff_fft: return differential_fft(burst);
        case TransformTag::dec_dft: return decimated_dft(burst, dec_factor);
        case TransformTag::kay_freq: return kay_frequency(burst, kay_window);
    }
    fail("invalid-config", "unknown transform tag");
}

Datapoint Pipeline::features(const Burst& burst) const {
    Datapoint dp = apply_transform(burst, transform, dec_factor, kay_window);
    if (normalize_input) {
        double acc = 0.0;
        for (double v : dp.values) acc += v * v;
        const double rms = std::sqrt(acc / static_cast<double>(dp.values.size()));
        if (rms > 0.0)
            for (double& v : dp.values) v /= rms;
    }
    return dp;
}

StateVector Pipeline::state(const Burst& burst) const {
    Datapoint dp = features(burst);
    if (!dlr_enabled) return std::move(dp.values);
    return run_split(dp, split, loops);
}

std::pair<int, std::vector<double>> Pipeline::classify(const Burst& burst) const {
    const StateVector x = state(burst);
    require(static_cast<Eigen::Index>(x.size()) == model.W.rows(), "pipeline-config",
            "reservoir/readout dimension mismatch");
    return ridge_predict(x, model);
}

int Pipeline::input_dim(std::size_t burst_len) const {
    // Every transform yields a burst-length datapoint; the reservoir replaces
    // that with its node count.
    return dlr_enabled ? split.node_count : static_cast<int>(burst_len);
}

} // namespace dlr
