#include "dlr/reservoir.hpp"

#include <cmath>

#include "dlr/classifier.hpp"
#include "dlr/error.hpp"

namespace dlr {

const char* to_string(CombineMode mode) {
    return mode == CombineMode::sum ? "sum" : "normalized_product";
}

CombineMode combine_from_string(const std::string& name) {
    if (name == "sum") return CombineMode::sum;
    if (name == "normalized_product") return CombineMode::normalized_product;
    fail("invalid-config", "unknown combine mode: " + name);
}

std::vector<double> make_mask(int node_count, std::uint64_t seed) {
    require(node_count >= 1, "invalid-config", "mask length must be positive");
    Rng rng(derive_seed(seed, stream::mask, 0));
    std::vector<double> mask(static_cast<std::size_t>(node_count));
    for (auto& m : mask) m = (rng.next() & 1) ? 1.0 : -1.0;
    return mask;
}

StateVector run_loop(const Datapoint& dp, const LoopConfig& cfg, Rng* noise) {
    const std::vector<double> mask = make_mask(cfg.node_count, cfg.mask_seed);
    return run_loop(dp, cfg, mask, noise);
}

StateVector run_loop(const Datapoint& dp, const LoopConfig& cfg,
                     std::span<const double> mask, Rng* noise) {
    require(cfg.node_count >= 1, "invalid-config", "node count must be positive");
    require(mask.size() == static_cast<std::size_t>(cfg.node_count), "invalid-config",
            "mask length must equal the node count");
    require(std::abs(cfg.eta) < 1.5, "invalid-config", "loop gain outside stability range");
    require(cfg.sigma == 0.0 || noise != nullptr, "invalid-config",
            "loop noise requested without a noise generator");
    for (double v : dp.values)
        require(std::isfinite(v), "numeric-error", "non-finite reservoir input");

    const auto n = static_cast<std::size_t>(cfg.node_count);
    const double h0 = cfg.h[0], h1 = cfg.h[1];

    // The feedback term reads exactly N chips back, i.e. the value written at
    // the same loop position during the previous input sample. That makes all
    // N nonlinearity evaluations of one sample independent; only the 2-tap
    // filter couples neighboring chips, through the previous output v_prev.
    std::vector<double> line(n, 0.0);
    std::vector<double> v(n);
    double v_prev = 0.0;
    if (cfg.sigma == 0.0) {
        for (const double s : dp.values) {
            const double in = cfg.nu * s;
            for (std::size_t k = 0; k < n; ++k)
                v[k] = std::sin(cfg.eta * line[k] + in * mask[k]);
            double vp = v_prev;
            for (std::size_t k = 0; k < n; ++k) {
                line[k] = h0 * v[k] + h1 * vp;
                vp = v[k];
            }
            v_prev = vp;
        }
    } else {
        for (const double s : dp.values) {
            const double in = cfg.nu * s;
            for (std::size_t k = 0; k < n; ++k)
                v[k] = std::sin(cfg.eta * line[k] + in * mask[k]);
            double vp = v_prev;
            for (std::size_t k = 0; k < n; ++k) {
                line[k] = h0 * v[k] + h1 * vp + cfg.sigma * noise->normal();
                vp = v[k];
            }
            v_prev = vp;
        }
    }
    return line;
}

std::vector<LoopConfig> make_loop_configs(const LoopConfig& base, int k) {
    require(k >= 1, "invalid-config", "loop count must be positive");
    std::vector<LoopConfig> cfgs(static_cast<std::size_t>(k), base);
    for (int j = 0; j < k; ++j)
        cfgs[static_cast<std::size_t>(j)].mask_seed =
            derive_seed(base.mask_seed, stream::mask, static_cast<std::uint64_t>(j) + 1);
    return cfgs;
}

StateVector run_split(const Datapoint& dp, const SplitConfig& sc,
                      const std::vector<LoopConfig>& cfgs, Rng* noise) {
    require(sc.k >= 1, "invalid-config", "split count must be positive");
    require(cfgs.size() == static_cast<std::size_t>(sc.k), "invalid-config",
            "need one loop config per split");
    for (const LoopConfig& c : cfgs)
        require(c.node_count == sc.node_count, "invalid-config",
                "all split loops must share the same node count");

    const std::vector<Datapoint> slices = pad_and_split(dp, sc.k);
    const auto n = static_cast<std::size_t>(sc.node_count);
    StateVector combined;
    if (sc.combine == CombineMode::sum) {
        combined.assign(n, 0.0);
        for (int j = 0; j < sc.k; ++j) {
            const StateVector xj = run_loop(slices[static_cast<std::size_t>(j)],
                                            cfgs[static_cast<std::size_t>(j)], noise);
            for (std::size_t i = 0; i < n; ++i) combined[i] += xj[i];
        }
    } else {
        combined.assign(n, 1.0);
        for (int j = 0; j < sc.k; ++j) {
            const StateVector xj = run_loop(slices[static_cast<std::size_t>(j)],
                                            cfgs[static_cast<std::size_t>(j)], noise);
            for (std::size_t i = 0; i < n; ++i) combined[i] *= xj[i];
        }
        double norm = 0.0;
        for (double c : combined) norm += c * c;
        norm = std::sqrt(norm);
        require(norm > 0.0, "degenerate-combine", "zero-norm product state");
        for (double& c : combined) c /= norm;
    }
    return combined;
}

CalibrationResult calibrate(const std::vector<Datapoint>& train,
                            const std::vector<Datapoint>& validation,
                            const SplitConfig& sc, const LoopConfig& base,
                            const CalibrationGrid& grid, double lambda,
                            const std::vector<int>& classes) {
    require(!validation.empty(), "invalid-config", "empty validation set");
    require(!train.empty(), "invalid-config", "empty training set");
    require(!grid.etas.empty() && !grid.nus.empty() && !grid.h1s.empty(),
            "invalid-config", "empty calibration grid");
    for (const auto& dp : train)
        require(dp.label.has_value(), "invalid-config", "unlabeled training datapoint");
    for (const auto& dp : validation)
        require(dp.label.has_value(), "invalid-config", "unlabeled validation datapoint");

    CalibrationResult result;
    result.config = base;
    double best_acc = -1.0;
    double best_abs_eta = 0.0;

    for (double eta : grid.etas) {
        for (double nu : grid.nus) {
            for (double h1 : grid.h1s) {
                LoopConfig cfg = base;
                cfg.eta = eta;
                cfg.nu = nu;
                cfg.h[1] = h1;
                const std::vector<LoopConfig> cfgs = make_loop_configs(cfg, sc.k);

                Eigen::MatrixXd states(static_cast<Eigen::Index>(train.size()),
                                       sc.node_count);
                std::vector<int> labels(train.size());
                for (std::size_t b = 0; b < train.size(); ++b) {
                    const StateVector x = run_split(train[b], sc, cfgs);
                    for (int i = 0; i < sc.node_count; ++i)
                        states(static_cast<Eigen::Index>(b), i) = x[static_cast<std::size_t>(i)];
                    labels[b] = *train[b].label;
                }
                const RidgeModel model = ridge_train(states, labels, lambda, classes);

                std::size_t correct = 0;
                for (const auto& dp : validation) {
                    const StateVector x = run_split(dp, sc, cfgs);
                    if (ridge_predict(x, model).first == *dp.label) ++correct;
                }
                const double acc = static_cast<double>(correct) /
                                   static_cast<double>(validation.size());
                result.table.push_back({eta, nu, h1, acc});

                const bool better = acc > best_acc ||
                    (acc == best_acc && std::abs(eta) < best_abs_eta);
                if (better) {
                    best_acc = acc;
                    best_abs_eta = std::abs(eta);
                    result.config = cfg;
                }
            }
        }
    }
    return result;
}

} // namespace dlr
