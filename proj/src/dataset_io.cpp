#include <fstream>

#include "dlr/binary_io.hpp"
#include "dlr/error.hpp"
#include "dlr/experiments.hpp"

namespace dlr {

namespace {
constexpr char kMagic[4] = {'D', 'L', 'R', 'D'};
constexpr std::uint16_t kVersion = 1;
} // namespace

std::map<int, std::vector<Burst>> Dataset::by_device() const {
    std::map<int, std::vector<Burst>> grouped;
    for (const Burst& b : bursts) {
        require(b.label.has_value(), "invalid-input", "unlabeled burst in dataset");
        grouped[*b.label].push_back(b);
    }
    return grouped;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "io-error", "cannot open " + path.string() + " for writing");
    io::write_magic(out, kMagic);
    io::write_scalar<std::uint16_t>(out, kVersion);
    io::write_scalar<std::uint32_t>(out, ds.burst_len);
    io::write_scalar<std::uint32_t>(out, static_cast<std::uint32_t>(ds.bursts.size()));
    io::write_scalar<std::uint16_t>(out, ds.device_count);
    io::write_scalar<double>(out, ds.sample_rate_hz);
    for (const Burst& b : ds.bursts) {
        require(b.samples.size() == ds.burst_len, "invalid-input",
                "burst length differs from dataset header");
        io::write_scalar<std::uint16_t>(
            out, static_cast<std::uint16_t>(b.label.value_or(0)));
        for (const cplx& v : b.samples) {
            io::write_scalar<float>(out, static_cast<float>(v.real()));
            io::write_scalar<float>(out, static_cast<float>(v.imag()));
        }
    }
    require(out.good(), "io-error", "write failed for " + path.string());
}

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "io-error", "cannot open " + path.string());
    io::check_magic(in, kMagic, "dataset");
    const auto version = io::read_scalar<std::uint16_t>(in, "version");
    require(version == kVersion, "format-error", "unsupported dataset version");

    Dataset ds;
    ds.burst_len = io::read_scalar<std::uint32_t>(in, "burst length");
    const auto count = io::read_scalar<std::uint32_t>(in, "burst count");
    ds.device_count = io::read_scalar<std::uint16_t>(in, "device count");
    ds.sample_rate_hz = io::read_scalar<double>(in, "sample rate");
    ds.bursts.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        Burst b;
        b.sample_rate_hz = ds.sample_rate_hz;
        b.label = static_cast<int>(io::read_scalar<std::uint16_t>(in, "device id"));
        b.samples.resize(ds.burst_len);
        for (auto& v : b.samples) {
            const float re = io::read_scalar<float>(in, "sample");
            const float im = io::read_scalar<float>(in, "sample");
            v = {static_cast<double>(re), static_cast<double>(im)};
        }
        ds.bursts.push_back(std::move(b));
    }
    return ds;
}

} // namespace dlr
