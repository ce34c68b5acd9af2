#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dlr/matched_filter.hpp"
#include "dlr/pipeline.hpp"
#include "dlr/types.hpp"

namespace dlr {

// One experiment: dataset shape, pipeline variant and seeds. Serialized as
// the JSON manifest schema consumed by every CLI subcommand.
struct ExperimentConfig {
    int devices = 20;
    int bursts_per_device = 600;        // training bursts per device
    int test_bursts_per_device = 50;
    int val_bursts_per_device = 40;     // threshold-calibration subset
    int jammer_devices = 0;             // extra devices emitted only as jammers
    std::size_t burst_len = 1024;
    double separation = 1.0;

    std::string transform = "fft_amp";
    int dec_factor = 8;
    int kay_window = 64;

    int node_count = 1000;              // N (total virtual nodes)
    int splits = 10;                    // k
    double eta = 0.5;
    double nu = 0.3;
    double h0 = 1.0;
    double h1 = 0.25;
    std::string combine = "sum";
    double sigma = 0.0;

    double lambda = -1.0;               // < 0: scale-aware default
    int train_impairment = 0;
    int filter_impairment = -1;         // < 0: same as train_impairment
    int threshold_impairment = -1;      // < 0: same as train_impairment
    double target_fpr = 0.05;
    std::string mf_mode = "average";    // or "random"

    bool mf_enabled = true;
    bool dlr_enabled = true;

    std::uint64_t master_seed = 42;

    std::vector<double> jsr_list_db;    // sweep points; -inf allowed
    int jam_max_delay = 512;

    // calibrate subcommand grid and subset sizes
    std::vector<double> cal_etas{0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> cal_nus{0.1, 0.3, 1.0};
    std::vector<double> cal_h1s{0.0, 0.25, 0.5};
    int cal_train_bursts = 40;
    int cal_val_bursts = 20;

    int effective_filter_impairment() const {
        return filter_impairment < 0 ? train_impairment : filter_impairment;
    }
    int effective_threshold_impairment() const {
        return threshold_impairment < 0 ? train_impairment : threshold_impairment;
    }
    std::string variant_name() const {
        if (mf_enabled) return dlr_enabled ? "mf-dlr" : "mf-rr";
        return dlr_enabled ? "dlr" : "rr";
    }

    std::string to_json() const;
    static ExperimentConfig from_json(const std::string& text);
    static ExperimentConfig load(const std::filesystem::path& path);
};

// In-memory dataset; the binary file format is the source of truth, so
// samples are float32-quantized at generation time.
struct Dataset {
    std::uint32_t burst_len = 0;
    std::uint16_t device_count = 0;
    double sample_rate_hz = kSampleRateHz;
    std::vector<Burst> bursts;

    std::map<int, std::vector<Burst>> by_device() const;
};

enum class DatasetRole { train, test, jammer };

// Deterministic synthetic dataset for one (config, role). Train/test/jammer
// payload seeds come from disjoint streams.
Dataset generate_dataset(const ExperimentConfig& cfg, DatasetRole role);

void save_dataset(const Dataset& ds, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

// Full trained artifact: filter bank + pipeline (loops + ridge readout).
struct TrainedModel {
    ExperimentConfig cfg;
    Pipeline pipeline;
    FilterBank bank;       // empty when mf_enabled = false
    double train_seconds = 0.0;
};

void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

// Builds the bank, transforms + runs loops over the impaired training set,
// trains the ridge readout and calibrates the entropy threshold.
TrainedModel train_model(const ExperimentConfig& cfg, const Dataset& train);

struct EvalResult {
    double accuracy = 0.0;
    std::size_t evaluated = 0;
    std::size_t rejected = 0;
};

// Accuracy over the test set impaired at T_j. Rejections count as errors.
EvalResult evaluate_model(const TrainedModel& model, const Dataset& test,
                          int test_impairment);

struct MatrixRow {
    int train_channel;
    int test_channel;
    std::string variant;
    double accuracy;
    std::size_t n_eval;
    std::uint64_t seed;
};

std::vector<MatrixRow> eval_matrix(const std::vector<TrainedModel>& models,
                                   const Dataset& test,
                                   const std::vector<int>& test_channels);

void write_matrix_csv(const std::vector<MatrixRow>& rows,
                      const std::filesystem::path& path);

struct JsrRow {
    int train_channel;
    double jsr_db;
    std::string variant;
    double accuracy;
    std::size_t n_eval;
    std::uint64_t seed;
};

// Superposes random jammer subsets (delays 0..jam_max_delay) on every test
// burst per JSR point. The per-burst signal impairment stream is shared
// across points, so the -inf row equals the unjammed accuracy exactly.
std::vector<JsrRow> sweep_jsr(const std::vector<TrainedModel>& models,
                              const Dataset& test, const Dataset& jammers,
                              const std::vector<double>& jsr_list_db);

void write_jsr_csv(const std::vector<JsrRow>& rows,
                   const std::filesystem::path& path);

// Figures of merit. memory = N * C with N the ridge input dimension;
// training cost is B * (N/k)^2 multiply-accumulates.
constexpr long long memory_params(long long n, long long c) { return n * c; }
constexpr long long train_macs(long long b_total, long long n, long long k = 1) {
    const long long nk = n / k;
    return b_total * nk * nk;
}

struct FomReport {
    long long memory_params = 0;
    long long train_macs = 0;           // with the configured split count
    long long train_macs_unsplit = 0;   // k = 1 equivalent
    double train_latency_s = 0.0;
    double infer_latency_s = 0.0;
    double accuracy = 0.0;

    std::string to_json() const;
};

// Formula FOMs from the config plus measured latencies when a model is given
// (single-burst inference over all filter hypotheses).
FomReport compute_fom(const ExperimentConfig& cfg, const TrainedModel* model,
                      double accuracy);

} // namespace dlr
