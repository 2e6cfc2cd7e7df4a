// SPDX-License-Identifier: Apache-2.0
#include "qfuca/errors.hpp"
#include "qfuca/geometry.hpp"

#include <functional>

namespace qfuca {

DimensionSpec sharing_spec(Dims cells, std::vector<LayoutType> pairs, std::span<const PairSolution> solutions,
                           double entire_radius) {
    const std::size_t N = cells.size();
    if (N < 2 || pairs.size() != N - 1 || solutions.size() != N - 1)
        throw ParameterError("sharing layout needs one type and one solution per level pair");
    if (!(entire_radius > 0.0)) throw ParameterError("entire radius must be positive");
    DimensionSpec s;
    s.cells = std::move(cells);
    s.pairs = std::move(pairs);
    s.radii.assign(N, 1.0);
    for (std::size_t n = N - 1; n-- > 0;) s.radii[n] = s.radii[n + 1] * solutions[n].ratio;
    double total = 0.0;
    for (double r : s.radii) total += r;
    for (double& r : s.radii) r *= entire_radius / total;
    s.offsets.assign(N, 0.0);
    for (std::size_t n = 0; n + 1 < N; ++n) {
        s.witnesses.push_back(solutions[n].witness);
        s.offsets[n] = ring_offset(s.cells[n], solutions[n].witness);
    }
    s.validate();
    return s;
}

namespace {

// Visits K tuples in lexicographic order of (K_N, ..., K_1) with
// min_modes <= prod K <= caps.max_modes.
void for_each_cells(int N, const EnumerationCaps& caps, std::size_t min_modes, const std::function<void(const Dims&)>& fn) {
    Dims cells(static_cast<std::size_t>(N), 2);
    std::function<void(int, std::size_t)> rec = [&](int level, std::size_t prod) {
        if (level < 0) {
            if (prod >= min_modes) fn(cells);
            return;
        }
        std::size_t rest = 1;  // smallest product of the remaining lower levels
        for (int m = 0; m < level; ++m) rest *= 2;
        for (int k = 2; k <= caps.max_cells; ++k) {
            if (prod * static_cast<std::size_t>(k) * rest > caps.max_modes) break;
            cells[static_cast<std::size_t>(level)] = k;
            rec(level - 1, prod * static_cast<std::size_t>(k));
        }
    };
    rec(N - 1, 1);
}

void for_each_candidate(std::span<const LayoutKind> types, const EnumerationCaps& caps, double entire_radius,
                        std::size_t min_modes, const std::function<void(const DimensionSpec&)>& fn) {
    for (int N = 2; N <= caps.max_dimension; ++N) {
        for_each_cells(N, caps, min_modes, [&](const Dims& cells) {
            for (LayoutKind kind : all_sharing_kinds()) {
                bool wanted = false;
                for (LayoutKind t : types) wanted = wanted || t == kind;
                if (!wanted) continue;

                // Level-gap assignments; a single all-zero entry for the other kinds.
                std::vector<std::vector<int>> gaps;
                std::vector<int> ra(static_cast<std::size_t>(N - 1), kind == LayoutKind::mixed ? 1 : 0);
                while (true) {
                    gaps.push_back(ra);
                    if (kind != LayoutKind::mixed) break;
                    int p = N - 2;
                    while (p >= 0 && ra[p] == N - (p + 1)) ra[p--] = 1;
                    if (p < 0) break;
                    ++ra[p];
                }

                for (const auto& g : gaps) {
                    std::vector<LayoutType> pairs;
                    std::vector<std::vector<PairSolution>> options;
                    bool any_empty = false;
                    for (int n = 0; n + 1 < N; ++n) {
                        pairs.push_back(LayoutType{kind, g[n]});
                        options.push_back(solve_layout_pair(pairs.back(), cells[n], cells[n + 1]));
                        any_empty = any_empty || options.back().empty();
                    }
                    if (any_empty) continue;
                    std::vector<std::size_t> pick(options.size(), 0);
                    while (true) {
                        std::vector<PairSolution> chosen;
                        for (std::size_t n = 0; n < options.size(); ++n) chosen.push_back(options[n][pick[n]]);
                        fn(sharing_spec(cells, pairs, chosen, entire_radius));
                        std::size_t p = options.size();
                        while (p-- > 0) {
                            if (++pick[p] < options[p].size()) break;
                            pick[p] = 0;
                        }
                        if (p == static_cast<std::size_t>(-1)) break;
                    }
                }
            }
        });
    }
}

}  // namespace

std::vector<DimensionSpec> layout_candidates(std::span<const LayoutKind> types, const EnumerationCaps& caps,
                                             double entire_radius) {
    std::vector<DimensionSpec> out;
    for_each_candidate(types, caps, entire_radius, 0, [&](const DimensionSpec& s) { out.push_back(s); });
    return out;
}

std::vector<DimensionSpec> enumerate_layouts(std::size_t budget, std::span<const LayoutKind> types,
                                             const EnumerationCaps& caps, double entire_radius,
                                             EnumerationStats* stats) {
    EnumerationStats local;
    EnumerationStats& st = stats ? *stats : local;
    st = EnumerationStats{1, 1, 0};
    if (budget < 1) throw ParameterError("element budget must be at least 1");
    std::vector<DimensionSpec> out;
    out.push_back(plain_spec(static_cast<int>(budget), entire_radius));

    for_each_candidate(types, caps, entire_radius, budget + 1, [&](const DimensionSpec& s) {
        ++st.examined;
        const double tol = default_tolerance(s);
        const bool fast = satisfies_layout_conditions(s);
        bool small = true;
        for (int k : s.cells) small = small && k <= caps.oracle_cells;
        if (!fast && !small) return;
        QfUcaGeometry geo;
        bool oracle = false;
        try {
            oracle = validate_geometrically(s, tol);
            if (oracle) geo = build_geometry(s, tol);
        } catch (const ToleranceError&) {
            ++st.ambiguous;
            return;  // ambiguous clustering: not a usable layout
        }
        if (fast != oracle)
            throw VerificationError("layout condition check (" + std::string(fast ? "feasible" : "infeasible") +
                                    ") disagrees with geometric oracle for " + describe(s));
        if (fast) ++st.feasible;
        if (fast && geo.n_elements() == budget) out.push_back(s);
    });
    return out;
}

}  // namespace qfuca
