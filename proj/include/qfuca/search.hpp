// SPDX-License-Identifier: Apache-2.0
//
// Exhaustive layout search for a fixed element budget.

#pragma once

#include "qfuca/capacity.hpp"
#include "qfuca/channel.hpp"
#include "qfuca/geometry.hpp"
#include "qfuca/modem.hpp"

#include <string>
#include <vector>

namespace qfuca {

enum class PowerSplit { live_modes, all_modes };

struct SimulationParams {
    ChannelParams channel;
    double snr_db = 15.0;
    double total_power = 1.0;          // W
    double reference_distance = 100.0; // the SNR is referenced to one element's gain at this distance
    double entire_radius = 4.0;        // R_E used when layouts are enumerated
    DistanceMode distance_mode = DistanceMode::exact;
    PowerSplit power_split = PowerSplit::live_modes;

    double noise_variance() const;
};

struct Candidate {
    DimensionSpec spec;
    std::size_t n_elements = 0;
    std::size_t n_modes = 0;
    std::size_t live_modes = 0;
    double se = 0.0;
    double eoal = 0.0;
    double leakage = 0.0;
    std::string status = "ok";  // error text when the evaluation failed

    bool ok() const { return status == "ok"; }
};

struct Evaluation {
    Candidate candidate;
    PrecodingSet precoding;
    SeReport report;
};

Evaluation evaluate_full(const DimensionSpec& spec, const SimulationParams& params);
Candidate evaluate_spec(const DimensionSpec& spec, const SimulationParams& params);

struct SearchResult {
    std::vector<Candidate> ledger;  // one entry per enumerated layout, enumeration order
    std::size_t best = 0;           // index into ledger
    std::size_t examined = 0;
    std::size_t feasible = 0;

    const Candidate& best_candidate() const { return ledger.at(best); }
};

// True when a should be preferred over b: higher SE, then lower dimension,
// then lexicographically smaller (K_N, ..., K_1).
bool better_candidate(const Candidate& a, const Candidate& b);

// Index of the preferred entry among the successful ones (first wins on full ties).
std::size_t select_best(const std::vector<Candidate>& ledger);

SearchResult optimize_layout(std::size_t budget, std::span<const LayoutKind> types, const EnumerationCaps& caps,
                             const SimulationParams& params, unsigned threads = 1);

}  // namespace qfuca
