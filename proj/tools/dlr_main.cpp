#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dlr/emitter_sim.hpp"
#include "dlr/error.hpp"
#include "dlr/experiments.hpp"
#include "dlr/impairments.hpp"
#include "dlr/reservoir.hpp"

namespace fs = std::filesystem;
using dlr::ExperimentConfig;

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;
};

ExperimentConfig load_config(const CommonArgs& args) {
    ExperimentConfig cfg = ExperimentConfig::load(args.config_path);
    if (args.seed) cfg.master_seed = *args.seed;
    return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool out_required = true) {
    cmd->add_option("--config", args.config_path, "experiment config (JSON manifest schema)")
        ->required();
    cmd->add_option("--seed", args.seed, "master seed override");
    auto* out = cmd->add_option("--out", args.out_path, "output path");
    if (out_required) out->required();
}

void write_manifest(const ExperimentConfig& cfg, const fs::path& dir,
                    bool with_jammers) {
    nlohmann::ordered_json m;
    m["format"] = "DLRD";
    m["version"] = 1;
    m["config"] = nlohmann::ordered_json::parse(cfg.to_json());
    m["master_seed"] = cfg.master_seed;
    m["files"] = {{"train", "train.dlrd"}, {"test", "test.dlrd"}};
    if (with_jammers) m["files"]["jammers"] = "jammers.dlrd";
    // Interpretation choices that downstream results depend on.
    m["interpretation"] = {
        {"differential_fft", "fft amplitude of the circular first difference"},
        {"split_remainder", "zero-pad the datapoint to the next multiple of k"},
        {"resampling", "stretch by the drawn factor, linear interpolation, truncated"},
        {"frequency_shift_units", "DFT bins (cycles per burst)"},
        {"iq_amplitude_units", "percent gain mismatch split across I and Q"},
        {"entropy", "Shannon entropy of softmax(scores), nats"},
        {"input_normalization", "datapoints scaled to unit RMS before the loops"},
    };
    std::ofstream out(dir / "manifest.json");
    dlr::require(out.good(), "io-error", "cannot write manifest");
    out << m.dump(2) << '\n';
}

int cmd_generate(const CommonArgs& args) {
    const ExperimentConfig cfg = load_config(args);
    const fs::path dir(args.out_path);
    fs::create_directories(dir);
    save_dataset(dlr::generate_dataset(cfg, dlr::DatasetRole::train), dir / "train.dlrd");
    save_dataset(dlr::generate_dataset(cfg, dlr::DatasetRole::test), dir / "test.dlrd");
    const bool with_jammers = cfg.jammer_devices > 0;
    if (with_jammers)
        save_dataset(dlr::generate_dataset(cfg, dlr::DatasetRole::jammer),
                     dir / "jammers.dlrd");
    write_manifest(cfg, dir, with_jammers);
    std::cout << "wrote datasets to " << dir.string() << "\n";
    return 0;
}

int cmd_train(const CommonArgs& args, const std::string& data_dir) {
    const ExperimentConfig cfg = load_config(args);
    const dlr::Dataset train = dlr::load_dataset(fs::path(data_dir) / "train.dlrd");
    const dlr::TrainedModel model = dlr::train_model(cfg, train);
    dlr::save_model(model, args.out_path);
    std::cout << "trained " << cfg.variant_name() << " on T" << cfg.train_impairment
              << " in " << model.train_seconds << " s -> " << args.out_path << "\n";
    return 0;
}

int cmd_eval_matrix(const CommonArgs& args, const std::string& data_dir,
                    const std::vector<std::string>& model_paths,
                    std::vector<int> channels) {
    (void)load_config(args); // validated for schema errors
    dlr::require(!model_paths.empty(), "invalid-config", "need at least one --model");
    const dlr::Dataset test = dlr::load_dataset(fs::path(data_dir) / "test.dlrd");
    std::vector<dlr::TrainedModel> models;
    models.reserve(model_paths.size());
    for (const auto& p : model_paths) models.push_back(dlr::load_model(p));
    if (channels.empty()) channels = {0, 1, 2, 3, 4};
    const auto rows = dlr::eval_matrix(models, test, channels);
    dlr::write_matrix_csv(rows, args.out_path);
    std::cout << "wrote " << rows.size() << " rows -> " << args.out_path << "\n";
    return 0;
}

int cmd_sweep_jsr(const CommonArgs& args, const std::string& data_dir,
                  const std::vector<std::string>& model_paths) {
    const ExperimentConfig cfg = load_config(args);
    dlr::require(!model_paths.empty(), "invalid-config", "need at least one --model");
    dlr::require(!cfg.jsr_list_db.empty(), "invalid-config",
                 "config has an empty jsr_list_db");
    const dlr::Dataset test = dlr::load_dataset(fs::path(data_dir) / "test.dlrd");
    const dlr::Dataset jammers = dlr::load_dataset(fs::path(data_dir) / "jammers.dlrd");
    std::vector<dlr::TrainedModel> models;
    models.reserve(model_paths.size());
    for (const auto& p : model_paths) models.push_back(dlr::load_model(p));
    const auto rows = dlr::sweep_jsr(models, test, jammers, cfg.jsr_list_db);
    dlr::write_jsr_csv(rows, args.out_path);
    std::cout << "wrote " << rows.size() << " rows -> " << args.out_path << "\n";
    return 0;
}

int cmd_fom(const CommonArgs& args, const std::string& model_path, double accuracy) {
    const ExperimentConfig cfg = load_config(args);
    dlr::FomReport report;
    if (!model_path.empty()) {
        const dlr::TrainedModel model = dlr::load_model(model_path);
        report = dlr::compute_fom(model.cfg, &model, accuracy);
    } else {
        report = dlr::compute_fom(cfg, nullptr, accuracy);
    }
    std::ofstream out(args.out_path);
    dlr::require(out.good(), "io-error", "cannot open " + args.out_path);
    out << report.to_json() << '\n';
    std::cout << report.to_json() << "\n";
    return 0;
}

// Grid-search the loop gains on a small slice of the training set. Runs
// without the matched filter: it probes loop dynamics, not the front end.
int cmd_calibrate(const CommonArgs& args, const std::string& data_dir) {
    const ExperimentConfig cfg = load_config(args);
    dlr::require(cfg.dlr_enabled, "invalid-config",
                 "calibrate needs dlr_enabled = true");
    const dlr::Dataset train = dlr::load_dataset(fs::path(data_dir) / "train.dlrd");
    const auto grouped = train.by_device();

    const dlr::ImpairmentSpec spec = dlr::spec_from_index(cfg.train_impairment);
    dlr::Pipeline probe;
    probe.transform = dlr::transform_from_string(cfg.transform);
    probe.dec_factor = cfg.dec_factor;
    probe.kay_window = cfg.kay_window;
    probe.dlr_enabled = false; // features only; loops come from the grid

    std::vector<dlr::Datapoint> cal_train, cal_val;
    std::uint64_t index = 0;
    for (const auto& [device, bursts] : grouped) {
        const int want = cfg.cal_train_bursts + cfg.cal_val_bursts;
        dlr::require(static_cast<int>(bursts.size()) >= want, "invalid-config",
                     "not enough bursts per device for the calibration split");
        for (int i = 0; i < want; ++i) {
            dlr::Rng rng(dlr::derive_seed(cfg.master_seed, dlr::stream::impair_train,
                                          index++));
            dlr::Datapoint dp = probe.features(dlr::apply(bursts[static_cast<std::size_t>(i)], spec, rng));
            dp.label = device;
            (i < cfg.cal_train_bursts ? cal_train : cal_val).push_back(std::move(dp));
        }
    }

    dlr::LoopConfig base;
    base.node_count = cfg.node_count / cfg.splits;
    base.eta = cfg.eta;
    base.nu = cfg.nu;
    base.h = {cfg.h0, cfg.h1};
    base.mask_seed = dlr::derive_seed(cfg.master_seed, dlr::stream::mask, 0);
    const dlr::SplitConfig sc{cfg.splits, base.node_count,
                              dlr::combine_from_string(cfg.combine)};
    std::vector<int> classes;
    for (const auto& [device, bursts] : grouped) classes.push_back(device);

    const dlr::CalibrationGrid grid{cfg.cal_etas, cfg.cal_nus, cfg.cal_h1s};
    const double lambda = cfg.lambda >= 0.0 ? cfg.lambda : 1e-3;
    const auto result =
        dlr::calibrate(cal_train, cal_val, sc, base, grid, lambda, classes);

    nlohmann::ordered_json j;
    j["best"] = {{"eta", result.config.eta},
                 {"nu", result.config.nu},
                 {"h1", result.config.h[1]}};
    nlohmann::ordered_json table = nlohmann::ordered_json::array();
    for (const auto& e : result.table)
        table.push_back({{"eta", e.eta}, {"nu", e.nu}, {"h1", e.h1},
                         {"accuracy", e.accuracy}});
    j["table"] = table;
    std::ofstream out(args.out_path);
    dlr::require(out.good(), "io-error", "cannot open " + args.out_path);
    out << j.dump(2) << '\n';
    std::cout << "best grid point: eta=" << result.config.eta
              << " nu=" << result.config.nu << " h1=" << result.config.h[1] << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Delay-loop reservoir SEI pipeline"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "worker thread count (default: hardware)");

    CommonArgs gen_args, train_args, matrix_args, jsr_args, fom_args, cal_args;
    std::string train_data, matrix_data, jsr_data, cal_data, fom_model;
    std::vector<std::string> matrix_models, jsr_models;
    std::vector<int> matrix_channels;
    double fom_accuracy = 0.0;

    auto* gen = app.add_subcommand("generate", "emit train/test/jammer datasets");
    add_common(gen, gen_args);

    auto* train = app.add_subcommand("train", "train a model on the generated data");
    add_common(train, train_args);
    train->add_option("--data", train_data, "dataset directory")->required();

    auto* matrix = app.add_subcommand("eval-matrix",
                                      "accuracy over the test impairment classes");
    add_common(matrix, matrix_args);
    matrix->add_option("--data", matrix_data, "dataset directory")->required();
    matrix->add_option("--model", matrix_models, "trained model file (repeatable)")
        ->required();
    matrix->add_option("--channels", matrix_channels, "test channels (default 0..4)");

    auto* jsr = app.add_subcommand("sweep-jsr", "accuracy under in-band jamming");
    add_common(jsr, jsr_args);
    jsr->add_option("--data", jsr_data, "dataset directory")->required();
    jsr->add_option("--model", jsr_models, "trained model file (repeatable)")
        ->required();

    auto* fom = app.add_subcommand("fom", "figures of merit report");
    add_common(fom, fom_args);
    fom->add_option("--model", fom_model, "trained model for measured latencies");
    fom->add_option("--accuracy", fom_accuracy, "accuracy to embed in the report");

    auto* cal = app.add_subcommand("calibrate", "grid-search the loop gains");
    add_common(cal, cal_args);
    cal->add_option("--data", cal_data, "dataset directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (threads > 0) {
        const std::string v = std::to_string(threads);
        setenv("DLR_THREADS", v.c_str(), 1);
    }

    try {
        if (gen->parsed()) return cmd_generate(gen_args);
        if (train->parsed()) return cmd_train(train_args, train_data);
        if (matrix->parsed())
            return cmd_eval_matrix(matrix_args, matrix_data, matrix_models,
                                   matrix_channels);
        if (jsr->parsed()) return cmd_sweep_jsr(jsr_args, jsr_data, jsr_models);
        if (fom->parsed()) return cmd_fom(fom_args, fom_model, fom_accuracy);
        if (cal->parsed()) return cmd_calibrate(cal_args, cal_data);
    } catch (const dlr::Error& e) {
        std::cerr << "{\"error\":\"" << e.code() << "\",\"message\":\""
                  << e.what() << "\"}\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":\"internal\",\"message\":\"" << e.what() << "\"}\n";
        return 2;
    }
    return 0;
}
