// SPDX-License-Identifier: Apache-2.0
#include "qfuca/search.hpp"

#include "qfuca/errors.hpp"
#include "qfuca/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace qfuca {

double SimulationParams::noise_variance() const {
    return noise_variance_for_snr(snr_db, total_power, reference_gain2(channel, reference_distance));
}

Evaluation evaluate_full(const DimensionSpec& spec, const SimulationParams& params) {
    const auto geo = build_geometry(spec);
    const auto H = assemble_H(spec, params.channel, params.distance_mode);
    Evaluation ev;
    ev.precoding = derive_precoding(H);
    verify_precoding(ev.precoding);
    const auto& ps = ev.precoding;
    const RVector<> powers = params.power_split == PowerSplit::live_modes
                                 ? live_power_allocation(params.total_power, ps.live)
                                 : uniform_power_allocation(params.total_power, ps.order());
    ev.report = spectral_efficiency(spec.cells, ps.gains, powers, params.noise_variance(), geo.n_elements(), ps.live);

    Candidate& c = ev.candidate;
    c.spec = spec;
    c.n_elements = geo.n_elements();
    c.n_modes = ps.order();
    c.live_modes = ps.live_count();
    c.se = ev.report.total_se;
    c.eoal = ev.report.eoal;
    c.leakage = ps.leakage;
    return ev;
}

Candidate evaluate_spec(const DimensionSpec& spec, const SimulationParams& params) {
    return evaluate_full(spec, params).candidate;
}

bool better_candidate(const Candidate& a, const Candidate& b) {
    const double scale = std::max(std::abs(a.se), std::abs(b.se));
    if (std::abs(a.se - b.se) > 1e-12 * scale) return a.se > b.se;
    if (a.spec.dimension() != b.spec.dimension()) return a.spec.dimension() < b.spec.dimension();
    return std::lexicographical_compare(a.spec.cells.rbegin(), a.spec.cells.rend(), b.spec.cells.rbegin(),
                                        b.spec.cells.rend());
}

std::size_t select_best(const std::vector<Candidate>& ledger) {
    std::size_t best = ledger.size();
    for (std::size_t i = 0; i < ledger.size(); ++i) {
        if (!ledger[i].ok()) continue;
        if (best == ledger.size() || better_candidate(ledger[i], ledger[best])) best = i;
    }
    if (best == ledger.size()) throw VerificationError("no layout could be evaluated");
    return best;
}

SearchResult optimize_layout(std::size_t budget, std::span<const LayoutKind> types, const EnumerationCaps& caps,
                             const SimulationParams& params, unsigned threads) {
    EnumerationStats stats;
    const auto specs = enumerate_layouts(budget, types, caps, params.entire_radius, &stats);
    SearchResult r;
    r.examined = stats.examined;
    r.feasible = specs.size();
    r.ledger = parallel_map(
        specs.size(),
        [&](std::size_t i) {
            try {
                return evaluate_spec(specs[i], params);
            } catch (const Error& e) {
                Candidate c;  // logged in the ledger, excluded from the argmax
                c.spec = specs[i];
                c.n_modes = specs[i].n_modes();
                c.status = e.what();
                return c;
            }
        },
        threads);
    r.best = select_best(r.ledger);
    return r;
}

}  // namespace qfuca
