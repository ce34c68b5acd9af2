#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "dlr/pipeline.hpp"
#include "dlr/types.hpp"

namespace dlr {

enum class BankMode { average, random_pick };

// Per-device matched-filter templates, unit energy each, plus the entropy
// threshold of the hypothesis test (unset until calibrated).
struct FilterBank {
    std::map<int, std::vector<cplx>> templates;
    BankMode mode = BankMode::average;
    std::optional<double> entropy_threshold;

    std::size_t template_length() const {
        return templates.empty() ? 0 : templates.begin()->second.size();
    }
};

// mode = average: complex mean over the device's bursts; mode = random_pick:
// one seeded draw per device. Templates are normalized to unit energy.
FilterBank build_bank(const std::map<int, std::vector<Burst>>& bursts_by_device,
                      BankMode mode, std::uint64_t seed = 0);

// Circular cross-correlation with the conjugated template, defined in the
// frequency domain: IDFT(DFT(burst) . conj(DFT(template))).
Burst filter_burst(const Burst& burst, std::span<const cplx> tmpl);

// Largest threshold keeping the wrong-filter acceptance rate (entropy <=
// threshold AND predicted class equals the filter's device) at or below
// target_fpr on the labeled validation set. Stores the threshold in the bank
// and returns it.
double calibrate_threshold(FilterBank& bank, const std::vector<Burst>& validation,
                           const Pipeline& pipeline, double target_fpr);

struct InferResult {
    std::optional<int> device;         // empty = rejected
    std::vector<int> hypothesis_ids;   // device order of the diagnostics
    std::vector<int> predicted;        // class under each filter hypothesis
    std::vector<double> entropies;
};

// Runs every filter hypothesis through the pipeline; candidates are the
// self-consistent hypotheses (predicted class equals the filter device) with
// entropy at or below the threshold. Returns the minimum-entropy candidate,
// ties toward the smaller device id, or reject when no candidate survives.
InferResult infer_with_bank(const Burst& burst, const FilterBank& bank,
                            const Pipeline& pipeline);

} // namespace dlr
