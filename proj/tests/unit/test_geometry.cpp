// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"
#include "qfuca/errors.hpp"
#include "qfuca/geometry.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace qfuca;

namespace {

DimensionSpec first_solution_spec(Dims cells, LayoutType type, double RE = 4.0) {
    std::vector<LayoutType> pairs(cells.size() - 1, type);
    std::vector<PairSolution> sols;
    for (std::size_t n = 0; n + 1 < cells.size(); ++n) {
        const auto s = solve_layout_pair(type, cells[n], cells[n + 1]);
        REQUIRE(!s.empty());
        sols.push_back(s.front());
    }
    return sharing_spec(cells, pairs, sols, RE);
}

bool contains_cells(const std::vector<DimensionSpec>& specs, const Dims& cells, LayoutKind family) {
    return std::any_of(specs.begin(), specs.end(),
                       [&](const DimensionSpec& s) { return s.cells == cells && s.family() == family; });
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("position_of small cases") {
    const auto p1 = plain_spec(4, 1.0);
    const int k0[] = {0}, k1[] = {1};
    CHECK((position_of(p1, k0) - Point(1, 0)).norm() < 1e-15);
    CHECK((position_of(p1, k1) - Point(0, 1)).norm() < 1e-15);

    const auto s = unconstrained_spec({4, 4}, {1.0, 2.0});
    const int idx[] = {2, 0};  // k_1 = 2, k_2 = 0
    const Point p = position_of(s, idx);
    CHECK((p - Point(1, 0)).norm() < 1e-15);
    const auto z = oracle::position(s, {2, 0});
    CHECK(std::abs(p.x() - z.real()) < 1e-15);
    CHECK(std::abs(p.y() - z.imag()) < 1e-15);

    const int bad[] = {4, 0};
    CHECK_THROWS_AS(position_of(s, bad), RangeError);
    const int short_idx[] = {1};
    CHECK_THROWS_AS(position_of(s, short_idx), RangeError);
}

TEST_CASE("positions agree with the complex-exponential oracle") {
    EnumerationCaps caps;
    caps.max_cells = 8;
    caps.max_dimension = 3;
    caps.max_modes = 128;
    const auto kinds = all_sharing_kinds();
    const auto specs = layout_candidates(kinds, caps, 4.0);
    REQUIRE(specs.size() > 50);
    for (const auto& s : specs) {
        const auto pts = realize_positions(s);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto z = oracle::position(s, oracle::digits(s.cells, i));
            CHECK(std::abs(pts[i].x() - z.real()) + std::abs(pts[i].y() - z.imag()) < 1e-13);
        }
    }
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(plain_spec(0, 1.0), ParameterError);
    CHECK_THROWS_AS(plain_spec(4, 0.0), ParameterError);
    CHECK_THROWS_AS(unconstrained_spec({1, 4}, {1, 1}), ParameterError);
    CHECK_NOTHROW(plain_spec(1, 1.0));
    DimensionSpec s = unconstrained_spec({3, 3, 3}, {1, 1, 1});
    s.pairs[1] = LayoutType{LayoutKind::mixed, 2};  // level 2 of 3 admits ra = 1 only
    CHECK_THROWS_AS(s.validate(), ParameterError);
    s.pairs[1] = LayoutType{LayoutKind::plain, 0};
    CHECK_THROWS_AS(s.validate(), ParameterError);
    CHECK(plain_spec(5, 2.5).entire_radius() == 2.5);
    CHECK(unconstrained_spec({3, 4}, {1.5, 2.5}).entire_radius() == 4.0);
}

TEST_CASE("layout type names round-trip") {
    for (const LayoutType t : {LayoutType{LayoutKind::shared_center, 0}, LayoutType{LayoutKind::mixed, 2},
                               LayoutType{LayoutKind::intersecting, 0}, LayoutType{LayoutKind::tangential, 0},
                               LayoutType{LayoutKind::plain, 0}})
        CHECK(parse_layout_type(to_string(t)) == t);
    CHECK_THROWS_AS(parse_layout_type("type9"), ParameterError);
    CHECK_THROWS_AS(parse_layout_type("type1:2"), ParameterError);
}

TEST_CASE("pair equations: tangential examples") {
    const LayoutType t4{LayoutKind::tangential, 0};
    CHECK(layout_equations_hold(t4, 4, 4, std::sin(kPi / 4), Witness{0, 1}));
    CHECK(std::abs(std::sin(kPi / 4) - 0.70711) < 1e-5);
    CHECK(layout_equations_hold(t4, 3, 6, 0.5, Witness{0, 1}));
    CHECK_FALSE(layout_equations_hold(t4, 4, 4, 0.8, Witness{0, 1}));
    CHECK_FALSE(layout_equations_hold(t4, 4, 5, std::sin(kPi / 5), Witness{0, 1}));
    const auto sols = solve_layout_pair(t4, 3, 6);
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].witness == Witness{0, 1});
    CHECK(std::abs(sols[0].ratio - 0.5) < 1e-15);
}

TEST_CASE("pair equations: intersecting ratio bounds are strict") {
    const LayoutType t3{LayoutKind::intersecting, 0};
    for (int Kn = 2; Kn <= 12; ++Kn)
        for (int Kn1 = 2; Kn1 <= 12; ++Kn1)
            for (int a = 0; a < Kn; ++a)
                for (int b = 0; b < Kn; ++b) {
                    CHECK_FALSE(layout_equations_hold(t3, Kn, Kn1, 1.0, Witness{a, b}));
                    CHECK_FALSE(layout_equations_hold(t3, Kn, Kn1, std::sin(kPi / Kn1), Witness{a, b}));
                }
    for (const auto& s : solve_layout_pair(t3, 8, 8)) {
        CHECK(s.ratio > std::sin(kPi / 8));
        CHECK(s.ratio < 1.0);
    }
}

TEST_CASE("solutions satisfy their own equations") {
    for (LayoutKind k : all_sharing_kinds())
        for (int Kn = 2; Kn <= 12; ++Kn)
            for (int Kn1 = 2; Kn1 <= 12; ++Kn1) {
                const LayoutType t{k, k == LayoutKind::mixed ? 1 : 0};
                for (const auto& s : solve_layout_pair(t, Kn, Kn1))
                    CHECK(layout_equations_hold(t, Kn, Kn1, s.ratio, s.witness));
            }
}

TEST_CASE("shared-centre pair with (4, 4)") {
    const auto s = first_solution_spec({4, 4}, LayoutType{LayoutKind::shared_center, 0});
    const auto report = check_layout_conditions(s, 1);
    CHECK(report.equations_hold);
    CHECK(report.feasible());
    CHECK(validate_geometrically(s, default_tolerance(s)));
    const auto g = build_geometry(s);
    CHECK(g.n_elements() == 9);  // one shared centre plus 4 x 2 distinct
    CHECK(std::abs(s.entire_radius() - 4.0) < 1e-12);
}

TEST_CASE("tangential (4, 4): adjacent cells share exactly one element") {
    const auto s = first_solution_spec({4, 4}, LayoutType{LayoutKind::tangential, 0});
    CHECK(std::abs(s.radii[0] / s.radii[1] - std::sin(kPi / 4)) < 1e-12);
    CHECK(validate_geometrically(s, default_tolerance(s)));
    const auto g = build_geometry(s);
    CHECK(g.n_elements() == 12);
    for (int a = 0; a < 4; ++a) {
        const int b = (a + 1) % 4;
        std::set<int> ca, cb;
        for (int k = 0; k < 4; ++k) {
            const int ia[] = {k, a}, ib[] = {k, b};
            ca.insert(g.element_of(ia));
            cb.insert(g.element_of(ib));
        }
        int shared = 0;
        for (int e : ca) shared += cb.count(e) ? 1 : 0;
        CHECK(shared == 1);
    }
    DimensionSpec bad = s;
    bad.radii[0] = 0.8 * bad.radii[1];
    CHECK_FALSE(validate_geometrically(bad, default_tolerance(bad)));
    CHECK_THROWS_AS(build_geometry(bad), LayoutError);
}

TEST_CASE("plain and unconstrained layouts claim no sharing") {
    for (int m = 1; m <= 30; ++m) {
        const auto p = plain_spec(m, 4.0);
        CHECK(validate_geometrically(p, default_tolerance(p)));
        CHECK(build_geometry(p).n_elements() == static_cast<std::size_t>(m));
    }
    const auto u = unconstrained_spec({5, 3}, {1.0, 3.0});
    CHECK(build_geometry(u).n_elements() == 15);
    CHECK(satisfies_layout_conditions(u));
    CHECK_THROWS_AS(validate_geometrically(u, 0.0), ParameterError);
}

TEST_CASE("clustering") {
    const std::vector<Point> pts = {{0, 0}, {1, 0}, {1e-9, 0}, {1, 1e-9}, {3, 3}};
    const auto c = cluster_positions(pts, 1e-6);
    CHECK(c.centers.size() == 3);
    CHECK(c.label == std::vector<int>{0, 1, 0, 1, 2});
    // a chain whose far end is outside tol of the first member is ambiguous
    const std::vector<Point> chain = {{0, 0}, {0.8e-6, 0}, {1.6e-6, 0}};
    CHECK_THROWS_AS(cluster_positions(chain, 1e-6), ToleranceError);
    CHECK_THROWS_AS(cluster_positions(pts, -1.0), ParameterError);
}

TEST_CASE("enumeration examples") {
    const auto kinds = all_sharing_kinds();
    EnumerationCaps caps;

    const auto b25 = enumerate_layouts(25, kinds, caps, 4.0);
    REQUIRE(!b25.empty());
    CHECK(b25.front().cells == Dims{25});
    CHECK(contains_cells(b25, {8, 4}, LayoutKind::shared_center));
    CHECK(contains_cells(b25, {4, 4, 4, 4}, LayoutKind::shared_center));
    for (const auto& s : b25) CHECK(build_geometry(s).n_elements() == 25);

    const auto b9 = enumerate_layouts(9, kinds, caps, 4.0);
    CHECK(std::any_of(b9.begin(), b9.end(), [](const DimensionSpec& s) { return s.dimension() == 2; }));

    const LayoutKind t1[] = {LayoutKind::shared_center};
    const auto b16 = enumerate_layouts(16, t1, caps, 4.0);
    CHECK(contains_cells(b16, {4, 4, 4}, LayoutKind::shared_center));

    const auto b1 = enumerate_layouts(1, kinds, caps, 4.0);
    REQUIRE(b1.size() == 1);
    CHECK(b1.front().cells == Dims{1});
    CHECK_THROWS_AS(enumerate_layouts(0, kinds, caps, 4.0), ParameterError);
}

TEST_CASE("three elements admit a collinear two-level layout") {
    // two 2-element cells sharing their common end point: 3 physical elements
    EnumerationCaps caps;
    caps.max_dimension = 2;
    const auto specs = enumerate_layouts(3, all_sharing_kinds(), caps, 4.0);
    REQUIRE(!specs.empty());
    CHECK(specs.front().cells == Dims{3});
    for (std::size_t i = 1; i < specs.size(); ++i) {
        CHECK(specs[i].cells == Dims{2, 2});
        const auto g = build_geometry(specs[i]);
        CHECK(g.n_elements() == 3);
        for (const auto& p : g.physical) CHECK(std::abs(p.y()) < 1e-12);
    }
}

TEST_CASE("enumeration order is deterministic and budget-exact") {
    EnumerationCaps caps;
    caps.max_cells = 16;
    const auto a = enumerate_layouts(16, all_sharing_kinds(), caps, 4.0);
    const auto b = enumerate_layouts(16, all_sharing_kinds(), caps, 4.0);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].cells == b[i].cells);
        CHECK(a[i].pairs == b[i].pairs);
        CHECK(a[i].witnesses == b[i].witnesses);
    }
    for (std::size_t i = 2; i < a.size(); ++i) CHECK(a[i - 1].dimension() <= a[i].dimension());
}

}  // TEST_SUITE
