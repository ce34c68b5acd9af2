#include "dlr/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "dlr/emitter_sim.hpp"
#include "dlr/error.hpp"
#include "dlr/impairments.hpp"
#include "dlr/parallel.hpp"

namespace dlr {

using ordered_json = nlohmann::ordered_json;

namespace {

double json_jsr(const ordered_json& v) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        fail("invalid-config", "unparseable JSR value: " + s);
    }
    return v.get<double>();
}

ordered_json jsr_json(double v) {
    if (std::isinf(v) && v < 0) return "-inf";
    return v;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string format_jsr(double v) {
    if (std::isinf(v) && v < 0) return "-inf";
    return format_double(v);
}

} // namespace

std::string ExperimentConfig::to_json() const {
    ordered_json j;
    j["devices"] = devices;
    j["bursts_per_device"] = bursts_per_device;
    j["test_bursts_per_device"] = test_bursts_per_device;
    j["val_bursts_per_device"] = val_bursts_per_device;
    j["jammer_devices"] = jammer_devices;
    j["burst_len"] = burst_len;
    j["separation"] = separation;
    j["transform"] = transform;
    j["dec_factor"] = dec_factor;
    j["kay_window"] = kay_window;
    j["node_count"] = node_count;
    j["splits"] = splits;
    j["eta"] = eta;
    j["nu"] = nu;
    j["h0"] = h0;
    j["h1"] = h1;
    j["combine"] = combine;
    j["sigma"] = sigma;
    j["lambda"] = lambda;
    j["train_impairment"] = train_impairment;
    j["filter_impairment"] = filter_impairment;
    j["threshold_impairment"] = threshold_impairment;
    j["target_fpr"] = target_fpr;
    j["mf_mode"] = mf_mode;
    j["mf_enabled"] = mf_enabled;
    j["dlr_enabled"] = dlr_enabled;
    j["master_seed"] = master_seed;
    j["jam_max_delay"] = jam_max_delay;
    ordered_json jsr = ordered_json::array();
    for (double v : jsr_list_db) jsr.push_back(jsr_json(v));
    j["jsr_list_db"] = jsr;
    j["cal_etas"] = cal_etas;
    j["cal_nus"] = cal_nus;
    j["cal_h1s"] = cal_h1s;
    j["cal_train_bursts"] = cal_train_bursts;
    j["cal_val_bursts"] = cal_val_bursts;
    return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        fail("invalid-config", std::string("config parse error: ") + e.what());
    }
    ExperimentConfig c;
    c.devices = j.value("devices", c.devices);
    c.bursts_per_device = j.value("bursts_per_device", c.bursts_per_device);
    c.test_bursts_per_device = j.value("test_bursts_per_device", c.test_bursts_per_device);
    c.val_bursts_per_device = j.value("val_bursts_per_device", c.val_bursts_per_device);
    c.jammer_devices = j.value("jammer_devices", c.jammer_devices);
    c.burst_len = j.value("burst_len", c.burst_len);
    c.separation = j.value("separation", c.separation);
    c.transform = j.value("transform", c.transform);
    c.dec_factor = j.value("dec_factor", c.dec_factor);
    c.kay_window = j.value("kay_window", c.kay_window);
    c.node_count = j.value("node_count", c.node_count);
    c.splits = j.value("splits", c.splits);
    c.eta = j.value("eta", c.eta);
    c.nu = j.value("nu", c.nu);
    c.h0 = j.value("h0", c.h0);
    c.h1 = j.value("h1", c.h1);
    c.combine = j.value("combine", c.combine);
    c.sigma = j.value("sigma", c.sigma);
    c.lambda = j.value("lambda", c.lambda);
    c.train_impairment = j.value("train_impairment", c.train_impairment);
    c.filter_impairment = j.value("filter_impairment", c.filter_impairment);
    c.threshold_impairment = j.value("threshold_impairment", c.threshold_impairment);
    c.target_fpr = j.value("target_fpr", c.target_fpr);
    c.mf_mode = j.value("mf_mode", c.mf_mode);
    c.mf_enabled = j.value("mf_enabled", c.mf_enabled);
    c.dlr_enabled = j.value("dlr_enabled", c.dlr_enabled);
    c.master_seed = j.value("master_seed", c.master_seed);
    c.jam_max_delay = j.value("jam_max_delay", c.jam_max_delay);
    if (j.contains("jsr_list_db")) {
        c.jsr_list_db.clear();
        for (const auto& v : j["jsr_list_db"]) c.jsr_list_db.push_back(json_jsr(v));
    }
    c.cal_etas = j.value("cal_etas", c.cal_etas);
    c.cal_nus = j.value("cal_nus", c.cal_nus);
    c.cal_h1s = j.value("cal_h1s", c.cal_h1s);
    c.cal_train_bursts = j.value("cal_train_bursts", c.cal_train_bursts);
    c.cal_val_bursts = j.value("cal_val_bursts", c.cal_val_bursts);
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(in.good(), "io-error", "cannot open config " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return from_json(text);
}

namespace {

// Samples are stored as float32 on disk; quantize at generation so the
// in-memory dataset and its file round-trip are bit-identical.
void quantize_f32(Burst& b) {
    for (auto& v : b.samples)
        v = {static_cast<double>(static_cast<float>(v.real())),
             static_cast<double>(static_cast<float>(v.imag()))};
}

struct RolePlan {
    std::uint64_t payload_stream;
    int first_device, device_count, bursts_per_device;
};

RolePlan role_plan(const ExperimentConfig& cfg, DatasetRole role) {
    switch (role) {
        case DatasetRole::train:
            return {stream::payload_train, 0, cfg.devices, cfg.bursts_per_device};
        case DatasetRole::test:
            return {stream::payload_test, 0, cfg.devices, cfg.test_bursts_per_device};
        case DatasetRole::jammer:
            return {stream::payload_jammer, cfg.devices, cfg.jammer_devices,
                    cfg.test_bursts_per_device};
    }
    fail("invalid-config", "unknown dataset role");
}

} // namespace

Dataset generate_dataset(const ExperimentConfig& cfg, DatasetRole role) {
    const RolePlan plan = role_plan(cfg, role);
    require(plan.device_count > 0 && plan.bursts_per_device > 0, "invalid-config",
            "dataset role has no bursts to generate");
    const int population_size = cfg.devices + cfg.jammer_devices;
    const EmitterPopulation pop =
        make_population(population_size, cfg.separation, cfg.master_seed);

    Dataset ds;
    ds.burst_len = static_cast<std::uint32_t>(cfg.burst_len);
    ds.device_count = static_cast<std::uint16_t>(plan.device_count);
    ds.bursts.resize(static_cast<std::size_t>(plan.device_count) *
                     static_cast<std::size_t>(plan.bursts_per_device));
    parallel_for(ds.bursts.size(), [&](std::size_t i) {
        const int d = plan.first_device + static_cast<int>(i) / plan.bursts_per_device;
        const std::uint64_t payload_seed =
            derive_seed(cfg.master_seed, plan.payload_stream, i);
        Burst b = emit_burst(pop.fingerprints[static_cast<std::size_t>(d)],
                             payload_seed, cfg.burst_len);
        quantize_f32(b);
        ds.bursts[i] = std::move(b);
    });
    return ds;
}

namespace {

Pipeline make_pipeline(const ExperimentConfig& cfg) {
    Pipeline p;
    p.transform = transform_from_string(cfg.transform);
    p.dec_factor = cfg.dec_factor;
    p.kay_window = cfg.kay_window;
    p.dlr_enabled = cfg.dlr_enabled;
    if (cfg.dlr_enabled) {
        require(cfg.splits >= 1 && cfg.node_count % cfg.splits == 0, "invalid-config",
                "split count must divide the total node count");
        LoopConfig base;
        base.node_count = cfg.node_count / cfg.splits;
        base.eta = cfg.eta;
        base.nu = cfg.nu;
        base.h = {cfg.h0, cfg.h1};
        base.sigma = cfg.sigma;
        base.mask_seed = derive_seed(cfg.master_seed, stream::mask, 0);
        p.split = SplitConfig{cfg.splits, base.node_count,
                              combine_from_string(cfg.combine)};
        p.loops = make_loop_configs(base, cfg.splits);
    }
    return p;
}

Burst impaired(const Burst& b, const ImpairmentSpec& spec, std::uint64_t master,
               std::uint64_t stream_tag, std::uint64_t index) {
    Rng rng(derive_seed(master, stream_tag, index));
    return apply(b, spec, rng);
}

} // namespace

TrainedModel train_model(const ExperimentConfig& cfg, const Dataset& train) {
    require(train.bursts.size() ==
                static_cast<std::size_t>(cfg.devices) *
                    static_cast<std::size_t>(cfg.bursts_per_device),
            "pipeline-config", "training dataset does not match the config");
    const auto t0 = std::chrono::steady_clock::now();

    TrainedModel model;
    model.cfg = cfg;
    model.pipeline = make_pipeline(cfg);

    std::vector<int> classes(static_cast<std::size_t>(cfg.devices));
    for (int d = 0; d < cfg.devices; ++d) classes[static_cast<std::size_t>(d)] = d;

    const ImpairmentSpec train_spec = spec_from_index(cfg.train_impairment);

    // Matched-filter bank from an independently impaired copy of the
    // training set ("the MF and the training set undergo the same
    // impairment", with independent channel draws).
    if (cfg.mf_enabled) {
        const ImpairmentSpec filter_spec =
            spec_from_index(cfg.effective_filter_impairment());
        std::vector<Burst> for_bank(train.bursts.size());
        parallel_for(train.bursts.size(), [&](std::size_t i) {
            for_bank[i] = impaired(train.bursts[i], filter_spec, cfg.master_seed,
                                   stream::impair_filter, i);
        });
        std::map<int, std::vector<Burst>> grouped;
        for (Burst& b : for_bank) grouped[*b.label].push_back(std::move(b));
        model.bank = build_bank(grouped,
                                cfg.mf_mode == "random" ? BankMode::random_pick
                                                        : BankMode::average,
                                cfg.master_seed);
    }

    // The last val_bursts_per_device bursts of every device are held out of
    // the ridge solve; the entropy threshold is calibrated on them so the
    // calibration entropies match held-out statistics.
    const int val_per_device =
        std::min(cfg.val_bursts_per_device, cfg.bursts_per_device - 1);
    const int fit_per_device = cfg.bursts_per_device - val_per_device;
    require(fit_per_device >= 1, "invalid-config", "no bursts left to fit on");
    std::vector<std::size_t> fit_idx, val_idx;
    for (int d = 0; d < cfg.devices; ++d) {
        const auto base = static_cast<std::size_t>(d) *
                          static_cast<std::size_t>(cfg.bursts_per_device);
        for (int b = 0; b < cfg.bursts_per_device; ++b)
            (b < fit_per_device ? fit_idx : val_idx)
                .push_back(base + static_cast<std::size_t>(b));
    }

    // Reservoir states (or raw transformed features) over the impaired,
    // label-filtered fitting set.
    const int dim = model.pipeline.input_dim(cfg.burst_len);
    Eigen::MatrixXd states(static_cast<Eigen::Index>(fit_idx.size()), dim);
    std::vector<int> labels(fit_idx.size());
    parallel_for(fit_idx.size(), [&](std::size_t i) {
        const std::size_t src = fit_idx[i];
        Burst b = impaired(train.bursts[src], train_spec, cfg.master_seed,
                           stream::impair_train, src);
        if (cfg.mf_enabled)
            b = filter_burst(b, model.bank.templates.at(*b.label));
        const StateVector x = model.pipeline.state(b);
        for (int c = 0; c < dim; ++c)
            states(static_cast<Eigen::Index>(i), c) = x[static_cast<std::size_t>(c)];
        labels[i] = *train.bursts[src].label;
    });

    const double lambda = cfg.lambda >= 0.0 ? cfg.lambda : default_lambda(states);
    model.pipeline.model = ridge_train(states, labels, lambda, classes);

    // Entropy threshold for the parallel-hypothesis test, calibrated on the
    // held-out slice under the threshold impairment class.
    if (cfg.mf_enabled) {
        const ImpairmentSpec thresh_spec =
            spec_from_index(cfg.effective_threshold_impairment());
        std::vector<Burst> validation(val_idx.size());
        parallel_for(val_idx.size(), [&](std::size_t i) {
            validation[i] = impaired(train.bursts[val_idx[i]], thresh_spec,
                                     cfg.master_seed, stream::impair_threshold,
                                     val_idx[i]);
        });
        calibrate_threshold(model.bank, validation, model.pipeline, cfg.target_fpr);
    }

    model.train_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return model;
}

EvalResult evaluate_model(const TrainedModel& model, const Dataset& test,
                          int test_impairment) {
    require(!test.bursts.empty(), "invalid-input", "empty test dataset");
    const ImpairmentSpec spec = spec_from_index(test_impairment);
    const std::uint64_t stream_tag =
        stream::impair_eval + 16 * static_cast<std::uint64_t>(test_impairment);

    std::atomic<std::size_t> correct{0};
    std::atomic<std::size_t> rejected{0};
    parallel_for(test.bursts.size(), [&](std::size_t i) {
        const Burst b = impaired(test.bursts[i], spec, model.cfg.master_seed,
                                 stream_tag, i);
        if (model.cfg.mf_enabled) {
            const InferResult r = infer_with_bank(b, model.bank, model.pipeline);
            if (!r.device.has_value()) {
                rejected.fetch_add(1);
            } else if (*r.device == *test.bursts[i].label) {
                correct.fetch_add(1);
            }
        } else {
            if (model.pipeline.classify(b).first == *test.bursts[i].label)
                correct.fetch_add(1);
        }
    });

    EvalResult result;
    result.evaluated = test.bursts.size();
    result.rejected = rejected.load();
    result.accuracy = static_cast<double>(correct.load()) /
                      static_cast<double>(result.evaluated);
    return result;
}

std::vector<MatrixRow> eval_matrix(const std::vector<TrainedModel>& models,
                                   const Dataset& test,
                                   const std::vector<int>& test_channels) {
    std::vector<MatrixRow> rows;
    for (const TrainedModel& model : models) {
        for (int j : test_channels) {
            const EvalResult r = evaluate_model(model, test, j);
            rows.push_back({model.cfg.train_impairment, j, model.cfg.variant_name(),
                            r.accuracy, r.evaluated, model.cfg.master_seed});
        }
    }
    return rows;
}

void write_matrix_csv(const std::vector<MatrixRow>& rows,
                      const std::filesystem::path& path) {
    std::ofstream out(path);
    require(out.good(), "io-error", "cannot open " + path.string() + " for writing");
    out << "train_channel,test_channel,variant,accuracy,n_eval,seed\n";
    for (const MatrixRow& r : rows)
        out << r.train_channel << ',' << r.test_channel << ',' << r.variant << ','
            << format_double(r.accuracy) << ',' << r.n_eval << ',' << r.seed << '\n';
    require(out.good(), "io-error", "write failed for " + path.string());
}

std::vector<JsrRow> sweep_jsr(const std::vector<TrainedModel>& models,
                              const Dataset& test, const Dataset& jammers,
                              const std::vector<double>& jsr_list_db) {
    require(!jsr_list_db.empty(), "invalid-config", "empty JSR list");
    require(!jammers.bursts.empty(), "invalid-input", "empty jammer pool");

    const auto jam_by_device = jammers.by_device();
    std::vector<const std::vector<Burst>*> pools;
    pools.reserve(jam_by_device.size());
    for (const auto& [device, pool] : jam_by_device) pools.push_back(&pool);

    std::vector<JsrRow> rows;
    for (const TrainedModel& model : models) {
        // Jammer devices must never appear in the training classes.
        for (const auto& [device, pool] : jam_by_device)
            for (int c : model.pipeline.model.classes)
                require(device != c, "protocol-error",
                        "jammer device overlaps the training set");

        const ImpairmentSpec clean = spec_from_index(0);
        for (std::size_t pi = 0; pi < jsr_list_db.size(); ++pi) {
            const double jsr = jsr_list_db[pi];
            std::atomic<std::size_t> correct{0};
            parallel_for(test.bursts.size(), [&](std::size_t i) {
                // Signal stream is shared across JSR points: same received
                // burst, different interference.
                const Burst signal = impaired(test.bursts[i], clean,
                                              model.cfg.master_seed,
                                              stream::jam_signal, i);
                Rng jam_rng(derive_seed(model.cfg.master_seed,
                                        stream::jam + 16 * pi, i));
                // Nonempty uniform random subset of jammer devices.
                std::vector<const Burst*> picked;
                do {
                    picked.clear();
                    for (const auto* pool : pools)
                        if (jam_rng.next() & 1) {
                            const auto idx = static_cast<std::size_t>(jam_rng.uniform_int(
                                0, static_cast<std::int64_t>(pool->size()) - 1));
                            picked.push_back(&(*pool)[idx]);
                        }
                } while (picked.empty());
                std::vector<Burst> jam_bursts;
                jam_bursts.reserve(picked.size());
                for (const Burst* b : picked) jam_bursts.push_back(*b);
                const auto [jammed, achieved] = superpose_jammers(
                    signal, jam_bursts, jsr, model.cfg.jam_max_delay, jam_rng);

                bool ok;
                if (model.cfg.mf_enabled) {
                    const InferResult r =
                        infer_with_bank(jammed, model.bank, model.pipeline);
                    ok = r.device.has_value() &&
                         *r.device == *test.bursts[i].label;
                } else {
                    ok = model.pipeline.classify(jammed).first ==
                         *test.bursts[i].label;
                }
                if (ok) correct.fetch_add(1);
            });
            rows.push_back({model.cfg.train_impairment, jsr,
                            model.cfg.variant_name(),
                            static_cast<double>(correct.load()) /
                                static_cast<double>(test.bursts.size()),
                            test.bursts.size(), model.cfg.master_seed});
        }
    }
    return rows;
}

void write_jsr_csv(const std::vector<JsrRow>& rows,
                   const std::filesystem::path& path) {
    std::ofstream out(path);
    require(out.good(), "io-error", "cannot open " + path.string() + " for writing");
    out << "train_channel,jsr_db,variant,accuracy,n_eval,seed\n";
    for (const JsrRow& r : rows)
        out << r.train_channel << ',' << format_jsr(r.jsr_db) << ',' << r.variant
            << ',' << format_double(r.accuracy) << ',' << r.n_eval << ',' << r.seed
            << '\n';
    require(out.good(), "io-error", "write failed for " + path.string());
}

std::string FomReport::to_json() const {
    ordered_json j;
    j["memory_params"] = memory_params;
    j["train_macs"] = train_macs;
    j["train_macs_unsplit"] = train_macs_unsplit;
    j["train_latency_s"] = train_latency_s;
    j["infer_latency_s"] = infer_latency_s;
    j["accuracy"] = accuracy;
    return j.dump(2);
}

FomReport compute_fom(const ExperimentConfig& cfg, const TrainedModel* model,
                      double accuracy) {
    FomReport report;
    const long long b_total = static_cast<long long>(cfg.devices) *
                              static_cast<long long>(cfg.bursts_per_device);
    const long long n = cfg.dlr_enabled ? cfg.node_count
                                        : static_cast<long long>(cfg.burst_len);
    const long long k = cfg.dlr_enabled ? cfg.splits : 1;
    report.memory_params = dlr::memory_params(n / k, cfg.devices);
    report.train_macs = dlr::train_macs(b_total, n, k);
    report.train_macs_unsplit = dlr::train_macs(b_total, n, 1);
    report.accuracy = accuracy;
    if (model != nullptr) {
        report.train_latency_s = model->train_seconds;
        // Single-burst inference latency over all filter hypotheses.
        const EmitterPopulation pop =
            make_population(std::max(cfg.devices + cfg.jammer_devices, 2),
                            cfg.separation, cfg.master_seed);
        const Burst probe = emit_burst(pop.fingerprints[0],
                                       derive_seed(cfg.master_seed,
                                                   stream::payload_test, 0),
                                       cfg.burst_len);
        double best = std::numeric_limits<double>::infinity();
        for (int rep = 0; rep < 3; ++rep) {
            const auto t0 = std::chrono::steady_clock::now();
            if (cfg.mf_enabled) {
                (void)infer_with_bank(probe, model->bank, model->pipeline);
            } else {
                (void)model->pipeline.classify(probe);
            }
            best = std::min(best, std::chrono::duration<double>(
                                      std::chrono::steady_clock::now() - t0)
                                      .count());
        }
        report.infer_latency_s = best;
    }
    return report;
}

} // namespace dlr
