#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dlr/classifier.hpp"
#include "dlr/emitter_sim.hpp"
#include "dlr/error.hpp"
#include "dlr/experiments.hpp"
#include "dlr/impairments.hpp"
#include "dlr/matched_filter.hpp"
#include "dlr/reservoir.hpp"
#include "dlr/transforms.hpp"

namespace py = pybind11;
using namespace dlr;

namespace {

Datapoint make_datapoint(std::vector<double> values, std::optional<int> label) {
    Datapoint dp;
    dp.values = std::move(values);
    dp.label = label;
    return dp;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Delay-loop reservoir SEI pipeline";

    py::register_exception<Error>(m, "DlrError");

    py::class_<Burst>(m, "Burst")
        .def(py::init([](std::vector<cplx> samples, std::optional<int> label) {
                 Burst b;
                 b.samples = std::move(samples);
                 b.label = label;
                 return b;
             }),
             py::arg("samples"), py::arg("label") = std::nullopt)
        .def_readwrite("samples", &Burst::samples)
        .def_readwrite("sample_rate_hz", &Burst::sample_rate_hz)
        .def_readwrite("label", &Burst::label)
        .def("__len__", [](const Burst& b) { return b.samples.size(); });

    py::class_<DeviceFingerprint>(m, "DeviceFingerprint")
        .def_readonly("device_id", &DeviceFingerprint::device_id)
        .def_readonly("cfo_ppm", &DeviceFingerprint::cfo_ppm)
        .def_readonly("tx_iq_gain_pct", &DeviceFingerprint::tx_iq_gain_pct)
        .def_readonly("tx_iq_phase_deg", &DeviceFingerprint::tx_iq_phase_deg)
        .def_readonly("pa_a3", &DeviceFingerprint::pa_a3)
        .def_readonly("pa_a5", &DeviceFingerprint::pa_a5)
        .def_readonly("transient_tau", &DeviceFingerprint::transient_tau)
        .def_readonly("transient_ring_freq", &DeviceFingerprint::transient_ring_freq)
        .def_readonly("transient_ring_amp", &DeviceFingerprint::transient_ring_amp)
        .def_readonly("clock_skew_ppm", &DeviceFingerprint::clock_skew_ppm)
        .def("cfo_cycles_per_sample", &DeviceFingerprint::cfo_cycles_per_sample);

    py::class_<EmitterPopulation>(m, "EmitterPopulation")
        .def_readonly("fingerprints", &EmitterPopulation::fingerprints)
        .def_readonly("separation", &EmitterPopulation::separation)
        .def_readonly("seed", &EmitterPopulation::seed);

    m.def("make_population", &make_population, py::arg("count"),
          py::arg("separation"), py::arg("seed"));
    m.def("make_payload", &make_payload, py::arg("payload_seed"), py::arg("length"));
    m.def("emit_burst", &emit_burst, py::arg("fingerprint"), py::arg("payload_seed"),
          py::arg("length") = 1024);
    m.def("detect_rising_edge",
          [](const std::vector<cplx>& stream, double threshold) {
              return detect_rising_edge(stream, threshold);
          },
          py::arg("stream"), py::arg("threshold"));
    m.def("extract_burst",
          [](const std::vector<cplx>& stream, std::size_t start, std::size_t len) {
              return extract_burst(stream, start, len);
          },
          py::arg("stream"), py::arg("start"), py::arg("length"));

    py::class_<ImpairmentSpec>(m, "ImpairmentSpec")
        .def_readonly("index", &ImpairmentSpec::index)
        .def_readonly("t_max", &ImpairmentSpec::t_max)
        .def_readonly("p_max", &ImpairmentSpec::p_max)
        .def_readonly("f_max", &ImpairmentSpec::f_max)
        .def_readonly("b_coh", &ImpairmentSpec::b_coh)
        .def_readonly("r_max", &ImpairmentSpec::r_max)
        .def_readonly("snr_db", &ImpairmentSpec::snr_db)
        .def_readonly("iq_amp_max_pct", &ImpairmentSpec::iq_amp_max_pct)
        .def_readonly("iq_phase_max_deg", &ImpairmentSpec::iq_phase_max_deg)
        .def_readonly("iq_dc_max", &ImpairmentSpec::iq_dc_max);

    m.def("spec_from_index", &spec_from_index, py::arg("index"));
    m.def("apply_impairment",
          [](const Burst& b, const ImpairmentSpec& spec, std::uint64_t seed) {
              Rng rng(seed);
              return apply(b, spec, rng);
          },
          py::arg("burst"), py::arg("spec"), py::arg("seed"));
    m.def("add_awgn",
          [](const Burst& b, double snr_db, std::uint64_t seed) {
              Rng rng(seed);
              return add_awgn(b, snr_db, rng);
          },
          py::arg("burst"), py::arg("snr_db"), py::arg("seed"));
    m.def("superpose_jammers",
          [](const Burst& signal, const std::vector<Burst>& jammers, double jsr_db,
             int max_delay, std::uint64_t seed) {
              Rng rng(seed);
              return superpose_jammers(signal, jammers, jsr_db, max_delay, rng);
          },
          py::arg("signal"), py::arg("jammers"), py::arg("jsr_db"),
          py::arg("max_delay") = 512, py::arg("seed") = 0);

    py::class_<Datapoint>(m, "Datapoint")
        .def(py::init(&make_datapoint), py::arg("values"),
             py::arg("label") = std::nullopt)
        .def_readwrite("values", &Datapoint::values)
        .def_readwrite("label", &Datapoint::label)
        .def("__len__", [](const Datapoint& dp) { return dp.values.size(); });

    m.def("amplitude", &amplitude);
    m.def("fft_amplitude", &fft_amplitude);
    m.def("differential_fft", &differential_fft);
    m.def("decimated_dft", &decimated_dft, py::arg("burst"), py::arg("d"));
    m.def("kay_frequency", &kay_frequency, py::arg("burst"), py::arg("window") = 64);
    m.def("split", &split, py::arg("datapoint"), py::arg("k"));
    m.def("pad_and_split", &pad_and_split, py::arg("datapoint"), py::arg("k"));

    py::class_<LoopConfig>(m, "LoopConfig")
        .def(py::init([](int node_count, double eta, double nu, double h0, double h1,
                         std::uint64_t mask_seed, double sigma) {
                 LoopConfig cfg;
                 cfg.node_count = node_count;
                 cfg.eta = eta;
                 cfg.nu = nu;
                 cfg.h = {h0, h1};
                 cfg.mask_seed = mask_seed;
                 cfg.sigma = sigma;
                 return cfg;
             }),
             py::arg("node_count"), py::arg("eta") = 0.5, py::arg("nu") = 0.3,
             py::arg("h0") = 1.0, py::arg("h1") = 0.25, py::arg("mask_seed") = 0,
             py::arg("sigma") = 0.0)
        .def_readwrite("node_count", &LoopConfig::node_count)
        .def_readwrite("eta", &LoopConfig::eta)
        .def_readwrite("nu", &LoopConfig::nu)
        .def_readwrite("mask_seed", &LoopConfig::mask_seed)
        .def_readwrite("sigma", &LoopConfig::sigma);

    py::enum_<CombineMode>(m, "CombineMode")
        .value("sum", CombineMode::sum)
        .value("normalized_product", CombineMode::normalized_product);

    py::class_<SplitConfig>(m, "SplitConfig")
        .def(py::init([](int k, int node_count, CombineMode combine) {
                 return SplitConfig{k, node_count, combine};
             }),
             py::arg("k"), py::arg("node_count"),
             py::arg("combine") = CombineMode::sum)
        .def_readwrite("k", &SplitConfig::k)
        .def_readwrite("node_count", &SplitConfig::node_count)
        .def_readwrite("combine", &SplitConfig::combine);

    m.def("make_mask", &make_mask, py::arg("node_count"), py::arg("seed"));
    m.def("run_loop",
          [](const Datapoint& dp, const LoopConfig& cfg) { return run_loop(dp, cfg); },
          py::arg("datapoint"), py::arg("config"));
    m.def("run_split",
          [](const Datapoint& dp, const SplitConfig& sc,
             const std::vector<LoopConfig>& cfgs) { return run_split(dp, sc, cfgs); },
          py::arg("datapoint"), py::arg("split_config"), py::arg("loop_configs"));
    m.def("make_loop_configs", &make_loop_configs, py::arg("base"), py::arg("k"));

    py::class_<RidgeModel>(m, "RidgeModel")
        .def_readonly("W", &RidgeModel::W)
        .def_readonly("lambda_", &RidgeModel::lambda)
        .def_readonly("classes", &RidgeModel::classes);

    m.def("ridge_train", &ridge_train, py::arg("states"), py::arg("labels"),
          py::arg("lambda_"), py::arg("classes"));
    m.def("ridge_predict",
          [](const std::vector<double>& state, const RidgeModel& model) {
              return ridge_predict(state, model);
          },
          py::arg("state"), py::arg("model"));
    m.def("entropy",
          [](const std::vector<double>& scores) { return entropy(scores); },
          py::arg("scores"));
    m.def("default_lambda", &default_lambda, py::arg("states"));

    py::enum_<BankMode>(m, "BankMode")
        .value("average", BankMode::average)
        .value("random_pick", BankMode::random_pick);

    py::class_<FilterBank>(m, "FilterBank")
        .def_readonly("entropy_threshold", &FilterBank::entropy_threshold)
        .def("device_ids",
             [](const FilterBank& bank) {
                 std::vector<int> ids;
                 for (const auto& [d, t] : bank.templates) ids.push_back(d);
                 return ids;
             })
        .def("template_for",
             [](const FilterBank& bank, int device) {
                 return bank.templates.at(device);
             });

    m.def("build_bank", &build_bank, py::arg("bursts_by_device"), py::arg("mode"),
          py::arg("seed") = 0);
    m.def("filter_burst",
          [](const Burst& b, const std::vector<cplx>& tmpl) {
              return filter_burst(b, tmpl);
          },
          py::arg("burst"), py::arg("template"));

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("devices", &ExperimentConfig::devices)
        .def_readwrite("bursts_per_device", &ExperimentConfig::bursts_per_device)
        .def_readwrite("test_bursts_per_device", &ExperimentConfig::test_bursts_per_device)
        .def_readwrite("val_bursts_per_device", &ExperimentConfig::val_bursts_per_device)
        .def_readwrite("jammer_devices", &ExperimentConfig::jammer_devices)
        .def_readwrite("burst_len", &ExperimentConfig::burst_len)
        .def_readwrite("separation", &ExperimentConfig::separation)
        .def_readwrite("transform", &ExperimentConfig::transform)
        .def_readwrite("node_count", &ExperimentConfig::node_count)
        .def_readwrite("splits", &ExperimentConfig::splits)
        .def_readwrite("eta", &ExperimentConfig::eta)
        .def_readwrite("nu", &ExperimentConfig::nu)
        .def_readwrite("h0", &ExperimentConfig::h0)
        .def_readwrite("h1", &ExperimentConfig::h1)
        .def_readwrite("lambda_", &ExperimentConfig::lambda)
        .def_readwrite("train_impairment", &ExperimentConfig::train_impairment)
        .def_readwrite("threshold_impairment", &ExperimentConfig::threshold_impairment)
        .def_readwrite("target_fpr", &ExperimentConfig::target_fpr)
        .def_readwrite("mf_enabled", &ExperimentConfig::mf_enabled)
        .def_readwrite("dlr_enabled", &ExperimentConfig::dlr_enabled)
        .def_readwrite("master_seed", &ExperimentConfig::master_seed)
        .def_readwrite("jsr_list_db", &ExperimentConfig::jsr_list_db)
        .def("variant_name", &ExperimentConfig::variant_name)
        .def("to_json", &ExperimentConfig::to_json)
        .def_static("from_json", &ExperimentConfig::from_json);

    py::class_<Dataset>(m, "Dataset")
        .def_readonly("burst_len", &Dataset::burst_len)
        .def_readonly("device_count", &Dataset::device_count)
        .def_readonly("bursts", &Dataset::bursts)
        .def("__len__", [](const Dataset& ds) { return ds.bursts.size(); });

    py::enum_<DatasetRole>(m, "DatasetRole")
        .value("train", DatasetRole::train)
        .value("test", DatasetRole::test)
        .value("jammer", DatasetRole::jammer);

    m.def("generate_dataset", &generate_dataset, py::arg("config"), py::arg("role"));
    m.def("save_dataset", &save_dataset, py::arg("dataset"), py::arg("path"));
    m.def("load_dataset", &load_dataset, py::arg("path"));

    py::class_<TrainedModel>(m, "TrainedModel")
        .def_readonly("cfg", &TrainedModel::cfg)
        .def_readonly("train_seconds", &TrainedModel::train_seconds)
        .def_property_readonly("entropy_threshold",
                               [](const TrainedModel& model) {
                                   return model.bank.entropy_threshold;
                               });

    m.def("train_model", &train_model, py::arg("config"), py::arg("train_dataset"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<EvalResult>(m, "EvalResult")
        .def_readonly("accuracy", &EvalResult::accuracy)
        .def_readonly("evaluated", &EvalResult::evaluated)
        .def_readonly("rejected", &EvalResult::rejected);

    m.def("evaluate_model", &evaluate_model, py::arg("model"), py::arg("test_dataset"),
          py::arg("test_impairment"), py::call_guard<py::gil_scoped_release>());

    m.def("infer_with_bank",
          [](const Burst& b, const TrainedModel& model) {
              const InferResult r = infer_with_bank(b, model.bank, model.pipeline);
              return py::make_tuple(r.device, r.predicted, r.entropies);
          },
          py::arg("burst"), py::arg("model"));

    m.def("save_model", &save_model, py::arg("model"), py::arg("path"));
    m.def("load_model", &load_model, py::arg("path"));

    m.def("memory_params", &memory_params, py::arg("n"), py::arg("c"));
    m.def("train_macs", &train_macs, py::arg("b_total"), py::arg("n"),
          py::arg("k") = 1);

#ifdef DLR_VERSION
    m.attr("__version__") = DLR_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
