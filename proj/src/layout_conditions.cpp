// SPDX-License-Identifier: Apache-2.0
//
// Level-pair equation systems. Witness angles are counted in half-steps pi/K_n
// from the inward radial of an nD cell: `even` locates the first intersection
// point with the neighbouring cell, `odd` the angle from there to the line
// joining the two cell centres.

#include "qfuca/errors.hpp"
#include "qfuca/geometry.hpp"

#include <cmath>

namespace qfuca {

namespace {

bool near(double a, double b, double eps) { return std::abs(a - b) <= eps; }

bool near_integer(double x, double eps) { return std::abs(x - std::round(x)) <= eps; }

// Ratio constraint of each sharing type.
bool ratio_admissible(const LayoutType& type, int outer_cells, double ratio, double eps) {
    const double s = std::sin(kPi / outer_cells);
    switch (type.kind) {
        case LayoutKind::shared_center: return near(ratio, 1.0, eps);
        case LayoutKind::mixed: return type.ra == 1 ? near(ratio, s, eps) : near(ratio, 1.0, eps);
        case LayoutKind::intersecting: return ratio > s + eps && ratio < 1.0 - eps;
        case LayoutKind::tangential: return near(ratio, s, eps);
        default: return false;
    }
}

}  // namespace

bool layout_equations_hold(const LayoutType& type, int inner_cells, int outer_cells, double ratio, const Witness& w,
                           double eps) {
    if (inner_cells < 2 || outer_cells < 2 || !(ratio > 0.0)) return false;
    if (type_number(type.kind) == 0) return false;
    if (!ratio_admissible(type, outer_cells, ratio, eps)) return false;
    const double Kn = inner_cells;
    const double Kn1 = outer_cells;

    if (type.kind == LayoutKind::tangential) {
        const int i = w.even;
        if (w.odd != 0 || i < 0 || i >= inner_cells || inner_cells - 2 * i <= 0) return false;
        return near(Kn1, 2.0 * Kn / (Kn - 2.0 * i), eps);
    }

    if (w.odd < 0 || w.odd >= inner_cells || w.even < 0 || w.even >= inner_cells) return false;
    if (!near(std::cos(kPi * w.odd / Kn), std::sin(kPi / Kn1) / ratio, eps)) return false;
    return near(Kn * (0.5 - 1.0 / Kn1), static_cast<double>(w.odd + w.even), eps);
}

std::vector<PairSolution> solve_layout_pair(const LayoutType& type, int inner_cells, int outer_cells, double eps) {
    std::vector<PairSolution> out;
    if (inner_cells < 2 || outer_cells < 2 || type_number(type.kind) == 0) return out;
    const double s = std::sin(kPi / outer_cells);

    if (type.kind == LayoutKind::tangential) {
        for (int i = 0; i < inner_cells; ++i) {
            Witness w{0, i};
            if (layout_equations_hold(type, inner_cells, outer_cells, s, w, eps)) out.push_back({s, w});
        }
        return out;
    }

    for (int io = 0; io < inner_cells; ++io) {
        double ratio = 1.0;
        switch (type.kind) {
            case LayoutKind::shared_center: ratio = 1.0; break;
            case LayoutKind::mixed: ratio = type.ra == 1 ? s : 1.0; break;
            case LayoutKind::intersecting: {
                const double c = std::cos(kPi * io / inner_cells);
                if (c <= eps) continue;
                ratio = s / c;
                break;
            }
            default: break;
        }
        for (int ie = 0; ie < inner_cells; ++ie) {
            Witness w{io, ie};
            if (layout_equations_hold(type, inner_cells, outer_cells, ratio, w, eps)) out.push_back({ratio, w});
        }
    }
    return out;
}

double ring_offset(int inner_cells, const Witness& w) {
    return kPi * static_cast<double>((inner_cells + w.even) % 2) / inner_cells;
}

namespace {

bool offset_matches(double offset, int cells, double target) {
    const double step = 2.0 * kPi / cells;
    double r = std::fmod(offset - target, step);
    if (r < 0) r += step;
    return std::min(r, step - r) <= 1e-9;
}

// Coincident sub-cells of two adjacent nD cells must also agree in orientation:
// their relative rotation (in turns) has to be a symmetry of the sub-cell.
bool orientation_compatible(const DimensionSpec& spec, int level, const Witness& w) {
    if (level < 2) return true;
    const int sub = spec.cells[level - 2];
    const double Kn = spec.cells[level - 1];
    const double Kn1 = spec.cells[level];
    const LayoutType& t = spec.pairs[level - 1];
    auto symmetric = [&](double turns) { return near_integer(sub * turns, 1e-9); };

    const bool tangent = t.kind == LayoutKind::tangential;
    if (tangent) return symmetric(0.5);
    if (!symmetric(1.0 / Kn1 + w.even / Kn)) return false;
    if (w.odd > 0 && !symmetric(1.0 / Kn1 + (w.even + 2.0 * w.odd) / Kn)) return false;
    return true;
}

}  // namespace

LevelPairReport check_layout_conditions(const DimensionSpec& spec, int level) {
    spec.validate();
    const int N = spec.dimension();
    if (level < 1 || level >= N)
        throw RangeError("level pair " + std::to_string(level) + " outside [1, " + std::to_string(N - 1) + ")");

    LevelPairReport report;
    const LayoutType& type = spec.pairs[level - 1];
    if (type_number(type.kind) == 0) return report;

    const int Kn = spec.cells[level - 1];
    const int Kn1 = spec.cells[level];
    const double ratio = spec.radii[level - 1] / spec.radii[level];

    const int odd_range = type.kind == LayoutKind::tangential ? 1 : Kn;
    for (int io = 0; io < odd_range; ++io)
        for (int ie = 0; ie < Kn; ++ie) {
            const Witness w{io, ie};
            if (!layout_equations_hold(type, Kn, Kn1, ratio, w)) continue;
            report.witnesses.push_back(w);
            if (offset_matches(spec.offsets[level - 1], Kn, ring_offset(Kn, w)) && orientation_compatible(spec, level, w))
                report.realizable_witnesses.push_back(w);
        }
    report.equations_hold = !report.witnesses.empty();
    report.realizable = !report.realizable_witnesses.empty();
    return report;
}

bool satisfies_layout_conditions(const DimensionSpec& spec) {
    spec.validate();
    for (int n = 1; n < spec.dimension(); ++n) {
        if (type_number(spec.pairs[n - 1].kind) == 0) continue;
        if (!check_layout_conditions(spec, n).feasible()) return false;
    }
    return true;
}

}  // namespace qfuca
