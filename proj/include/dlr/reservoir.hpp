#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dlr/rng.hpp"
#include "dlr/transforms.hpp"

namespace dlr {

enum class Nonlinearity { sin };

// One delay loop: N virtual nodes realized by N chip-time passes through a
// single nonlinearity, with loop gain eta, input gain nu and a 2-tap mixing
// filter h on successive nonlinearity outputs.
struct LoopConfig {
    int node_count = 1000;            // N: virtual nodes = mask length in chips
    double eta = 0.5;
    double nu = 0.3;
    std::array<double, 2> h{1.0, 0.25};
    std::uint64_t mask_seed = 0;
    Nonlinearity nl = Nonlinearity::sin;
    double sigma = 0.0;               // per-chip loop noise std, 0 = noiseless
};

using StateVector = std::vector<double>;

enum class CombineMode { sum, normalized_product };

const char* to_string(CombineMode mode);
CombineMode combine_from_string(const std::string& name);

struct SplitConfig {
    int k = 1;                        // parallel loop count
    int node_count = 1000;            // N_j, equal across loops
    CombineMode combine = CombineMode::sum;
};

// i.i.d. equiprobable +-1 spreading sequence, deterministic per seed.
std::vector<double> make_mask(int node_count, std::uint64_t seed);

// Chip-clock recursion: a length-N delay line starts at zero; every input
// sample is spread over N chips by the mask, each chip passes through
// sin(eta * feedback + nu * chip) and the 2-tap filter h before re-entering
// the line. The state vector is the final N line values in position order.
// `noise` is only consulted when cfg.sigma > 0.
StateVector run_loop(const Datapoint& dp, const LoopConfig& cfg, Rng* noise = nullptr);

// Same recursion with an explicit spreading mask instead of cfg.mask_seed.
StateVector run_loop(const Datapoint& dp, const LoopConfig& cfg,
                     std::span<const double> mask, Rng* noise = nullptr);

// Splits the datapoint (zero-padding to a multiple of k), runs one loop per
// slice with independent masks, and combines the k state vectors.
StateVector run_split(const Datapoint& dp, const SplitConfig& sc,
                      const std::vector<LoopConfig>& cfgs, Rng* noise = nullptr);

// Per-loop configs sharing the base gains with independent derived masks.
std::vector<LoopConfig> make_loop_configs(const LoopConfig& base, int k);

struct CalibrationEntry {
    double eta, nu, h1;
    double accuracy;
};

struct CalibrationResult {
    LoopConfig config;                // best grid point
    std::vector<CalibrationEntry> table;
};

struct CalibrationGrid {
    std::vector<double> etas;
    std::vector<double> nus;
    std::vector<double> h1s;
};

// Exhaustive grid search over (eta, nu, h1) maximizing validation accuracy of
// the downstream ridge readout. Ties break toward smaller |eta|, then scan
// order (eta-major, then nu, then h1). Datapoints must be labeled.
CalibrationResult calibrate(const std::vector<Datapoint>& train,
                            const std::vector<Datapoint>& validation,
                            const SplitConfig& sc, const LoopConfig& base,
                            const CalibrationGrid& grid, double lambda,
                            const std::vector<int>& classes);

} // namespace dlr
