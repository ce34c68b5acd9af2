#include <fstream>

#include "dlr/binary_io.hpp"
#include "dlr/error.hpp"
#include "dlr/experiments.hpp"

namespace dlr {

namespace {
constexpr char kMagic[4] = {'D', 'L', 'R', 'M'};
constexpr std::uint16_t kVersion = 1;
} // namespace

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "io-error", "cannot open " + path.string() + " for writing");
    io::write_magic(out, kMagic);
    io::write_scalar<std::uint16_t>(out, kVersion);

    const std::string cfg_json = model.cfg.to_json();
    io::write_scalar<std::uint32_t>(out, static_cast<std::uint32_t>(cfg_json.size()));
    out.write(cfg_json.data(), static_cast<std::streamsize>(cfg_json.size()));

    const Pipeline& p = model.pipeline;
    io::write_scalar<std::uint8_t>(out, p.dlr_enabled ? 1 : 0);
    io::write_scalar<std::uint8_t>(out, p.normalize_input ? 1 : 0);
    io::write_scalar<std::uint8_t>(out, static_cast<std::uint8_t>(p.transform));
    io::write_scalar<std::int32_t>(out, p.dec_factor);
    io::write_scalar<std::int32_t>(out, p.kay_window);

    io::write_scalar<std::int32_t>(out, p.split.k);
    io::write_scalar<std::int32_t>(out, p.split.node_count);
    io::write_scalar<std::uint8_t>(out, static_cast<std::uint8_t>(p.split.combine));
    io::write_scalar<std::uint32_t>(out, static_cast<std::uint32_t>(p.loops.size()));
    for (const LoopConfig& lc : p.loops) {
        io::write_scalar<std::int32_t>(out, lc.node_count);
        io::write_scalar<double>(out, lc.eta);
        io::write_scalar<double>(out, lc.nu);
        io::write_scalar<double>(out, lc.h[0]);
        io::write_scalar<double>(out, lc.h[1]);
        io::write_scalar<std::uint64_t>(out, lc.mask_seed);
        io::write_scalar<double>(out, lc.sigma);
    }

    const RidgeModel& m = p.model;
    io::write_scalar<std::uint32_t>(out, static_cast<std::uint32_t>(m.W.rows()));
    io::write_scalar<std::uint32_t>(out, static_cast<std::uint32_t>(m.W.cols()));
    io::write_scalar<double>(out, m.lambda);
    io::write_scalar<std::uint32_t>(out, static_cast<std::uint32_t>(m.classes.size()));
    for (int c : m.classes) io::write_scalar<std::int32_t>(out, c);
    for (Eigen::Index i = 0; i < m.W.rows(); ++i)
        for (Eigen::Index j = 0; j < m.W.cols(); ++j)
            io::write_scalar<double>(out, m.W(i, j));

    io::write_scalar<std::uint8_t>(out, model.bank.templates.empty() ? 0 : 1);
    if (!model.bank.templates.empty()) {
        io::write_scalar<std::uint8_t>(out,
            model.bank.mode == BankMode::average ? 0 : 1);
        io::write_scalar<std::uint16_t>(
            out, static_cast<std::uint16_t>(model.bank.templates.size()));
        for (const auto& [device, tmpl] : model.bank.templates) {
            io::write_scalar<std::int32_t>(out, device);
            io::write_scalar<std::uint32_t>(out, static_cast<std::uint32_t>(tmpl.size()));
            for (const cplx& v : tmpl) {
                io::write_scalar<double>(out, v.real());
                io::write_scalar<double>(out, v.imag());
            }
        }
        io::write_scalar<std::uint8_t>(out, model.bank.entropy_threshold ? 1 : 0);
        io::write_scalar<double>(out, model.bank.entropy_threshold.value_or(0.0));
    }
    io::write_scalar<double>(out, model.train_seconds);
    require(out.good(), "io-error", "write failed for " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "io-error", "cannot open " + path.string());
    io::check_magic(in, kMagic, "model");
    const auto version = io::read_scalar<std::uint16_t>(in, "version");
    require(version == kVersion, "format-error", "unsupported model version");

    TrainedModel model;
    const auto cfg_len = io::read_scalar<std::uint32_t>(in, "config length");
    std::string cfg_json(cfg_len, '\0');
    in.read(cfg_json.data(), cfg_len);
    require(static_cast<bool>(in), "format-error", "truncated config block");
    model.cfg = ExperimentConfig::from_json(cfg_json);

    Pipeline& p = model.pipeline;
    p.dlr_enabled = io::read_scalar<std::uint8_t>(in, "dlr flag") != 0;
    p.normalize_input = io::read_scalar<std::uint8_t>(in, "normalize flag") != 0;
    p.transform = static_cast<TransformTag>(io::read_scalar<std::uint8_t>(in, "transform"));
    p.dec_factor = io::read_scalar<std::int32_t>(in, "dec factor");
    p.kay_window = io::read_scalar<std::int32_t>(in, "kay window");

    p.split.k = io::read_scalar<std::int32_t>(in, "split count");
    p.split.node_count = io::read_scalar<std::int32_t>(in, "node count");
    p.split.combine = static_cast<CombineMode>(io::read_scalar<std::uint8_t>(in, "combine"));
    const auto loop_count = io::read_scalar<std::uint32_t>(in, "loop count");
    p.loops.resize(loop_count);
    for (LoopConfig& lc : p.loops) {
        lc.node_count = io::read_scalar<std::int32_t>(in, "loop nodes");
        lc.eta = io::read_scalar<double>(in, "eta");
        lc.nu = io::read_scalar<double>(in, "nu");
        lc.h[0] = io::read_scalar<double>(in, "h0");
        lc.h[1] = io::read_scalar<double>(in, "h1");
        lc.mask_seed = io::read_scalar<std::uint64_t>(in, "mask seed");
        lc.sigma = io::read_scalar<double>(in, "sigma");
    }

    const auto rows = io::read_scalar<std::uint32_t>(in, "weight rows");
    const auto cols = io::read_scalar<std::uint32_t>(in, "weight cols");
    p.model.lambda = io::read_scalar<double>(in, "lambda");
    const auto class_count = io::read_scalar<std::uint32_t>(in, "class count");
    p.model.classes.resize(class_count);
    for (auto& c : p.model.classes) c = io::read_scalar<std::int32_t>(in, "class id");
    p.model.W.resize(rows, cols);
    for (std::uint32_t i = 0; i < rows; ++i)
        for (std::uint32_t j = 0; j < cols; ++j)
            p.model.W(i, j) = io::read_scalar<double>(in, "weight");

    const bool has_bank = io::read_scalar<std::uint8_t>(in, "bank flag") != 0;
    if (has_bank) {
        model.bank.mode = io::read_scalar<std::uint8_t>(in, "bank mode") == 0
                              ? BankMode::average : BankMode::random_pick;
        const auto tmpl_count = io::read_scalar<std::uint16_t>(in, "template count");
        for (std::uint16_t t = 0; t < tmpl_count; ++t) {
            const auto device = io::read_scalar<std::int32_t>(in, "template device");
            const auto len = io::read_scalar<std::uint32_t>(in, "template length");
            std::vector<cplx> tmpl(len);
            for (auto& v : tmpl) {
                const double re = io::read_scalar<double>(in, "template sample");
                const double im = io::read_scalar<double>(in, "template sample");
                v = {re, im};
            }
            model.bank.templates.emplace(device, std::move(tmpl));
        }
        const bool has_threshold = io::read_scalar<std::uint8_t>(in, "threshold flag") != 0;
        const double threshold = io::read_scalar<double>(in, "threshold");
        if (has_threshold) model.bank.entropy_threshold = threshold;
    }
    model.train_seconds = io::read_scalar<double>(in, "train time");
    return model;
}

} // namespace dlr
