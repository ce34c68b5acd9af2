#pragma once

#include <utility>
#include <vector>

#include "dlr/classifier.hpp"
#include "dlr/reservoir.hpp"
#include "dlr/transforms.hpp"
#include "dlr/types.hpp"

namespace dlr {

// Everything between a (possibly matched-filtered) burst and a class score:
// transform, unit-RMS input normalization, optional split-loop reservoir,
// ridge readout. With dlr_enabled = false the transform feeds the readout
// directly (the plain ridge variant).
struct Pipeline {
    TransformTag transform = TransformTag::fft_amp;
    int dec_factor = 8;
    int kay_window = 64;
    bool normalize_input = true;
    bool dlr_enabled = true;
    SplitConfig split{};
    std::vector<LoopConfig> loops;
    RidgeModel model;

    Datapoint features(const Burst& burst) const;
    StateVector state(const Burst& burst) const;
    std::pair<int, std::vector<double>> classify(const Burst& burst) const;

    // Feature dimension the ridge model must match.
    int input_dim(std::size_t burst_len) const;
};

Datapoint apply_transform(const Burst& burst, TransformTag tag, int dec_factor,
                          int kay_window);

} // namespace dlr
