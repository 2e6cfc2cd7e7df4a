// SPDX-License-Identifier: Apache-2.0
//
// Quasi-fractal UCA layouts: recursive cell description, element positions,
// layout-type conditions, shared-element clustering and layout enumeration.
//
// Every nD cell is a rigid copy of its siblings rotated about the parent
// centre: the azimuth of a level-n cell is measured from the outward radial
// direction of its parent, so the element with logical index (k_N, ..., k_1)
// sits at
//
//     sum_n R_n * u(A_n),   A_n = A_{n+1} + psi_n + 2*pi*k_n/K_n,   A_{N+1} = 0,
//
// with u(a) = (cos a, sin a) and psi_n a per-level half-step offset (0 or
// pi/K_n) fixed by the layout witnesses. All ring points of a level satisfy
// the same relative geometry, which is what makes the top-level channel
// block-circulant.

#pragma once

#include "qfuca/types.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qfuca {

enum class LayoutKind {
    plain,          // single-level UCA, N = 1
    unconstrained,  // hand-built multi-level spec with no sharing claim
    shared_center,  // type 1
    mixed,          // type 2, carries ra
    intersecting,   // type 3
    tangential,     // type 4
};

struct LayoutType {
    LayoutKind kind = LayoutKind::plain;
    int ra = 0;  // level gap, only meaningful for LayoutKind::mixed

    friend bool operator==(const LayoutType&, const LayoutType&) = default;
};

std::string to_string(LayoutKind kind);
std::string to_string(const LayoutType& type);
LayoutType parse_layout_type(std::string_view text);
LayoutKind parse_layout_kind(std::string_view text);
int type_number(LayoutKind kind);  // 1..4 for the sharing types, 0 otherwise

// Integer witnesses of one level pair: (i_{2n-1}, i_{2n}), in half-steps pi/K_n.
// For tangential pairs `even` carries i_n and `odd` is zero.
struct Witness {
    int odd = 0;
    int even = 0;

    friend bool operator==(const Witness&, const Witness&) = default;
};

struct DimensionSpec {
    Dims cells;                       // K_1 .. K_N
    std::vector<double> radii;        // R_1 .. R_N, meters
    std::vector<LayoutType> pairs;    // pairs[n-1] relates levels n and n+1; empty when N = 1
    std::vector<Witness> witnesses;   // one per pair
    std::vector<double> offsets;      // psi_1 .. psi_N, radians

    int dimension() const { return static_cast<int>(cells.size()); }
    std::size_t n_modes() const { return product(cells); }
    double entire_radius() const;

    // Homogeneous family label used for reporting (plain for N = 1).
    LayoutKind family() const;
    bool uses_sharing() const;

    // Structural invariants; throws ParameterError.
    void validate() const;
};

DimensionSpec plain_spec(int elements, double radius);
DimensionSpec unconstrained_spec(Dims cells, std::vector<double> radii);

// Short description such as "2D type1 K=(8,4)" (cells listed outermost first).
std::string describe(const DimensionSpec& spec);

// ---- positions -------------------------------------------------------------

Point position_of(const DimensionSpec& spec, std::span<const int> idx);

// Absolute azimuths A_1..A_N of a logical index (the per-level phi_n of the channel
// expansion).
std::vector<double> level_azimuths(const DimensionSpec& spec, std::span<const int> idx);

// All logical positions in flat-index order.
std::vector<Point> realize_positions(const DimensionSpec& spec);

// ---- layout-type conditions -----------------------------------------------

inline constexpr double kFeasibilityTolerance = 1e-9;

// (ratio R_n/R_{n+1}, witness) pairs solving the pair's equation system.
struct PairSolution {
    double ratio = 1.0;
    Witness witness;
};

// True when the pair equations hold for the given ratio and witness.
bool layout_equations_hold(const LayoutType& type, int inner_cells, int outer_cells, double ratio,
                           const Witness& w, double eps = kFeasibilityTolerance);

// Every (ratio, witness) the equations admit for a level pair, witnesses ascending.
std::vector<PairSolution> solve_layout_pair(const LayoutType& type, int inner_cells, int outer_cells,
                                            double eps = kFeasibilityTolerance);

// Half-step offset psi_n that puts ring points on the intersection points.
double ring_offset(int inner_cells, const Witness& w);

// Spec from per-pair types and equation solutions: radii follow the ratio
// chain scaled to entire_radius, offsets follow the witnesses.
DimensionSpec sharing_spec(Dims cells, std::vector<LayoutType> pairs, std::span<const PairSolution> solutions,
                           double entire_radius);

struct LevelPairReport {
    bool equations_hold = false;          // some witness satisfies the equation system
    bool realizable = false;              // ... and is consistent with offsets and sub-cell symmetry
    std::vector<Witness> witnesses;       // all equation witnesses
    std::vector<Witness> realizable_witnesses;

    bool feasible() const { return realizable; }
};

// Level pair (n, n+1), 1 <= n < N.
LevelPairReport check_layout_conditions(const DimensionSpec& spec, int level);

// All level pairs feasible (true for plain and unconstrained specs).
bool satisfies_layout_conditions(const DimensionSpec& spec);

// ---- clustering and geometry ----------------------------------------------

inline constexpr double kRelativeMergeTolerance = 1e-6;
double default_tolerance(const DimensionSpec& spec);

struct Clustering {
    std::vector<Point> centers;  // unique positions, ordered by first logical occurrence
    std::vector<int> label;      // label[i] = cluster of point i
};

// Single-linkage clustering with radius tol. Throws ToleranceError when a
// cluster's members are not all within tol of its first member.
Clustering cluster_positions(std::span<const Point> points, double tol);

bool validate_geometrically(const DimensionSpec& spec, double tol);

struct QfUcaGeometry {
    DimensionSpec spec;
    std::vector<Point> physical;
    std::vector<int> logical_map;  // flat logical index -> physical element id

    std::size_t n_elements() const { return physical.size(); }
    int element_of(std::span<const int> idx) const;
};

QfUcaGeometry build_geometry(const DimensionSpec& spec, double tol);
QfUcaGeometry build_geometry(const DimensionSpec& spec);

// ---- enumeration -----------------------------------------------------------

struct EnumerationCaps {
    int max_dimension = 4;
    int max_cells = 25;
    std::size_t max_modes = 1024;
    int oracle_cells = 12;  // below this, the geometric oracle runs on every candidate
};

// Specs with the given homogeneous layout types, built from the equation
// solutions, radii scaled to entire_radius. No geometric filtering.
std::vector<DimensionSpec> layout_candidates(std::span<const LayoutKind> types, const EnumerationCaps& caps,
                                             double entire_radius);

// Candidate specs whose clustered element count equals budget, plus the plain
// UCA with `budget` elements (always first). Throws VerificationError if the
// condition check and the geometric oracle disagree on a candidate.
struct EnumerationStats {
    std::size_t examined = 0;   // candidates built from equation solutions, plain included
    std::size_t feasible = 0;   // passing both checks, any element count
    std::size_t ambiguous = 0;  // skipped because clustering was ambiguous
};

std::vector<DimensionSpec> enumerate_layouts(std::size_t budget, std::span<const LayoutKind> types,
                                             const EnumerationCaps& caps, double entire_radius,
                                             EnumerationStats* stats = nullptr);

std::vector<LayoutKind> all_sharing_kinds();

}  // namespace qfuca
