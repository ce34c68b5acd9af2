#include "dlr/matched_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dlr/error.hpp"
#include "dlr/fft.hpp"
#include "dlr/parallel.hpp"
#include "dlr/rng.hpp"

namespace dlr {

FilterBank build_bank(const std::map<int, std::vector<Burst>>& bursts_by_device,
                      BankMode mode, std::uint64_t seed) {
    require(!bursts_by_device.empty(), "missing-device", "no training devices");
    FilterBank bank;
    bank.mode = mode;
    for (const auto& [device, bursts] : bursts_by_device) {
        require(!bursts.empty(), "missing-device",
                "device " + std::to_string(device) + " has no training bursts");
        const std::size_t len = bursts.front().samples.size();
        std::vector<cplx> tmpl(len, cplx{0.0});
        if (mode == BankMode::average) {
            for (const Burst& b : bursts) {
                require(b.samples.size() == len, "size-error",
                        "inconsistent burst lengths for one device");
                for (std::size_t i = 0; i < len; ++i) tmpl[i] += b.samples[i];
            }
            const double inv = 1.0 / static_cast<double>(bursts.size());
            for (auto& v : tmpl) v *= inv;
        } else {
            Rng rng(derive_seed(seed, stream::bank_pick,
                                static_cast<std::uint64_t>(device)));
            const auto pick = static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(bursts.size()) - 1));
            tmpl = bursts[pick].samples;
        }
        const double e = energy(tmpl);
        require(e > 0.0, "degenerate-template",
                "zero-energy template for device " + std::to_string(device));
        const double inv = 1.0 / std::sqrt(e);
        for (auto& v : tmpl) v *= inv;
        bank.templates.emplace(device, std::move(tmpl));
    }
    return bank;
}

Burst filter_burst(const Burst& burst, std::span<const cplx> tmpl) {
    require(burst.samples.size() == tmpl.size(), "size-error",
            "burst and template lengths differ");
    std::vector<cplx> spec_b = dft(burst.samples);
    const std::vector<cplx> spec_t = dft(tmpl);
    for (std::size_t i = 0; i < spec_b.size(); ++i)
        spec_b[i] *= std::conj(spec_t[i]);
    Burst out;
    out.samples = dft(spec_b, /*inverse=*/true);
    out.sample_rate_hz = burst.sample_rate_hz;
    out.label = burst.label;
    return out;
}

double calibrate_threshold(FilterBank& bank, const std::vector<Burst>& validation,
                           const Pipeline& pipeline, double target_fpr) {
    require(!bank.templates.empty(), "missing-device", "empty filter bank");
    require(!validation.empty(), "invalid-config", "empty validation set");

    // Entropies of all wrong-filter hypotheses; violators are the accepted
    // ones (the filter's own device came back as the predicted class).
    for (const Burst& b : validation)
        require(b.label.has_value(), "invalid-config", "unlabeled validation burst");
    std::vector<std::vector<std::pair<double, bool>>> per_burst(validation.size());
    parallel_for(validation.size(), [&](std::size_t i) {
        const Burst& b = validation[i];
        for (const auto& [device, tmpl] : bank.templates) {
            if (device == *b.label) continue;
            const auto [cls, scores] = pipeline.classify(filter_burst(b, tmpl));
            per_burst[i].emplace_back(entropy(scores), cls == device);
        }
    });
    std::size_t total_wrong = 0;
    std::vector<double> all_wrong;
    std::vector<double> violators;
    for (const auto& hyps : per_burst) {
        for (const auto& [h, violates] : hyps) {
            ++total_wrong;
            all_wrong.push_back(h);
            if (violates) violators.push_back(h);
        }
    }

    double threshold;
    if (total_wrong == 0) {
        // Degenerate single-device bank: accept everything the softmax allows.
        threshold = std::log(static_cast<double>(
            std::max<std::size_t>(bank.templates.size(), 1)));
    } else {
        require(target_fpr >= 0.0, "calibration-infeasible",
                "target false-positive rate below zero (achieved rate 0)");
        std::sort(violators.begin(), violators.end());
        const auto allowed = static_cast<std::size_t>(
            target_fpr * static_cast<double>(total_wrong));
        if (allowed >= violators.size()) {
            threshold = *std::max_element(all_wrong.begin(), all_wrong.end());
        } else {
            // Just below the first violator that would break the budget.
            threshold = std::nextafter(violators[allowed],
                                       -std::numeric_limits<double>::infinity());
        }
    }
    bank.entropy_threshold = threshold;
    return threshold;
}

InferResult infer_with_bank(const Burst& burst, const FilterBank& bank,
                            const Pipeline& pipeline) {
    require(!bank.templates.empty(), "missing-device", "empty filter bank");
    require(bank.entropy_threshold.has_value(), "pipeline-config",
            "filter bank has no calibrated entropy threshold");
    require(bank.template_length() == burst.samples.size(), "pipeline-config",
            "template length does not match the burst");

    InferResult result;
    const double threshold = *bank.entropy_threshold;
    double best_entropy = std::numeric_limits<double>::infinity();
    for (const auto& [device, tmpl] : bank.templates) {
        const auto [cls, scores] = pipeline.classify(filter_burst(burst, tmpl));
        const double h = entropy(scores);
        result.hypothesis_ids.push_back(device);
        result.predicted.push_back(cls);
        result.entropies.push_back(h);
        if (cls == device && h <= threshold && h < best_entropy) {
            best_entropy = h;
            result.device = device;
        }
    }
    return result;
}

} // namespace dlr
