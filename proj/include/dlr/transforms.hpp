#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dlr/types.hpp"

namespace dlr {

enum class TransformTag { amplitude, fft_amp, diff_fft, dec_dft, kay_freq };

const char* to_string(TransformTag tag);
TransformTag transform_from_string(const std::string& name);

// Real-valued reservoir input derived from one burst.
struct Datapoint {
    std::vector<double> values;
    TransformTag tag = TransformTag::amplitude;
    std::optional<int> label;
    int dec_factor = 0; // set for dec_dft only
};

// Elementwise modulus.
Datapoint amplitude(const Burst& burst);

// |DFT| of the burst, unnormalized forward transform, natural bin order.
// Length must be a power of two.
Datapoint fft_amplitude(const Burst& burst);

// fft_amplitude of the circular first difference s[n+1] - s[n].
Datapoint differential_fft(const Burst& burst);

// Concatenated |DFT| of the d polyphase subsequences; d must divide the length.
Datapoint decimated_dft(const Burst& burst, int d);

// Sliding-window Kay frequency estimator, output zero-padded to the burst
// length. Estimates are in cycles/sample.
Datapoint kay_frequency(const Burst& burst, int window = 64);

// Contiguous equal slices in order; k must divide the length exactly.
std::vector<Datapoint> split(const Datapoint& dp, int k);

// Zero-pads to the next multiple of k, then splits. This is the remainder
// policy used by the split-loop pipeline (1024 -> 1030 for k = 10).
std::vector<Datapoint> pad_and_split(const Datapoint& dp, int k);

} // namespace dlr
