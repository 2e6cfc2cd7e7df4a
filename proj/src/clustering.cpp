// SPDX-License-Identifier: Apache-2.0
#include "qfuca/errors.hpp"
#include "qfuca/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <unordered_map>

namespace qfuca {

double default_tolerance(const DimensionSpec& spec) { return kRelativeMergeTolerance * spec.entire_radius(); }

namespace {

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

std::int64_t cell_key(std::int64_t gx, std::int64_t gy) { return gx * 1000003LL + gy; }

}  // namespace

Clustering cluster_positions(std::span<const Point> points, double tol) {
    if (!(tol > 0.0)) throw ParameterError("merge tolerance must be positive");
    const std::size_t n = points.size();
    DisjointSet ds(n);
    std::unordered_map<std::int64_t, std::vector<int>> grid;
    grid.reserve(n);
    const double tol2 = tol * tol;
    for (std::size_t i = 0; i < n; ++i) {
        const auto gx = static_cast<std::int64_t>(std::floor(points[i].x() / tol));
        const auto gy = static_cast<std::int64_t>(std::floor(points[i].y() / tol));
        for (std::int64_t dx = -1; dx <= 1; ++dx)
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                auto it = grid.find(cell_key(gx + dx, gy + dy));
                if (it == grid.end()) continue;
                for (int j : it->second)
                    if ((points[i] - points[j]).squaredNorm() <= tol2) ds.unite(static_cast<int>(i), j);
            }
        grid[cell_key(gx, gy)].push_back(static_cast<int>(i));
    }

    Clustering c;
    c.label.assign(n, -1);
    std::vector<int> label_of_root(n, -1);
    std::vector<int> first_member;
    for (std::size_t i = 0; i < n; ++i) {
        const int r = ds.find(static_cast<int>(i));
        if (label_of_root[r] < 0) {
            label_of_root[r] = static_cast<int>(c.centers.size());
            c.centers.push_back(points[i]);
            first_member.push_back(static_cast<int>(i));
        }
        c.label[i] = label_of_root[r];
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double d = (points[i] - c.centers[c.label[i]]).norm();
        if (d > tol)
            throw ToleranceError("position " + std::to_string(i) + " chains into cluster " + std::to_string(c.label[i]) +
                                 " but lies " + std::to_string(d) + " m from its representative (tolerance " +
                                 std::to_string(tol) + " m)");
    }
    return c;
}

namespace {

using Signature = std::vector<int>;

// Physical ids of the (n-1)D sub-cell at ring point j of nD cell a inside
// (n+1)D cell c, for level pair n.
Signature sub_cell(const std::vector<int>& label, std::size_t sub_size, std::size_t cell_size, std::size_t group_size,
                   std::size_t c, int a, int j) {
    const std::size_t base = c * group_size + static_cast<std::size_t>(a) * cell_size + static_cast<std::size_t>(j) * sub_size;
    Signature s(label.begin() + static_cast<std::ptrdiff_t>(base), label.begin() + static_cast<std::ptrdiff_t>(base + sub_size));
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

// Intersection points of two adjacent nD cell circles: 0, 1 (tangent) or 2.
int circle_contacts(const DimensionSpec& spec, int level, double tol) {
    const double d = 2.0 * spec.radii[level] * std::sin(kPi / spec.cells[level]);
    const double two_r = 2.0 * spec.radii[level - 1];
    if (std::abs(d - two_r) <= tol) return 1;
    return d < two_r ? 2 : 0;
}

bool pair_pattern_holds(const DimensionSpec& spec, const std::vector<int>& label, int level, double tol) {
    const LayoutType& type = spec.pairs[level - 1];
    const int Kn = spec.cells[level - 1];
    const int Kn1 = spec.cells[level];
    std::size_t sub_size = 1;
    for (int m = 0; m < level - 1; ++m) sub_size *= static_cast<std::size_t>(spec.cells[m]);
    const std::size_t cell_size = sub_size * static_cast<std::size_t>(Kn);
    const std::size_t group_size = cell_size * static_cast<std::size_t>(Kn1);
    const std::size_t groups = label.size() / group_size;
    const int contacts = circle_contacts(spec, level, tol);

    for (std::size_t c = 0; c < groups; ++c) {
        std::vector<std::set<Signature>> cells(static_cast<std::size_t>(Kn1));
        for (int a = 0; a < Kn1; ++a)
            for (int j = 0; j < Kn; ++j) cells[a].insert(sub_cell(label, sub_size, cell_size, group_size, c, a, j));

        const int adjacent_pairs = Kn1 == 2 ? 1 : Kn1;
        std::vector<int> shared(static_cast<std::size_t>(adjacent_pairs));
        for (int a = 0; a < adjacent_pairs; ++a) {
            const auto& next = cells[(a + 1) % Kn1];
            shared[a] = static_cast<int>(std::count_if(cells[a].begin(), cells[a].end(),
                                                       [&](const Signature& s) { return next.count(s) > 0; }));
        }
        std::set<Signature> common = cells[0];
        for (int a = 1; a < Kn1; ++a) {
            std::set<Signature> keep;
            for (const auto& s : common)
                if (cells[a].count(s)) keep.insert(s);
            common.swap(keep);
        }
        auto all_shared = [&](int expect) {
            return std::all_of(shared.begin(), shared.end(), [&](int v) { return v == expect; });
        };

        bool ok = false;
        const bool centre_claim =
            type.kind == LayoutKind::shared_center || (type.kind == LayoutKind::mixed && type.ra != 1);
        const bool tangent_claim = type.kind == LayoutKind::tangential || (type.kind == LayoutKind::mixed && type.ra == 1);
        if (centre_claim)
            ok = contacts >= 1 && !common.empty() && all_shared(contacts);
        else if (tangent_claim)
            ok = contacts == 1 && all_shared(1);
        else if (type.kind == LayoutKind::intersecting)
            ok = contacts == 2 && all_shared(2) && (Kn1 == 2 || common.empty());
        else
            ok = true;
        if (!ok) return false;
    }
    return true;
}

bool pattern_holds(const DimensionSpec& spec, const Clustering& clusters, double tol) {
    for (int n = 1; n < spec.dimension(); ++n) {
        if (type_number(spec.pairs[n - 1].kind) == 0) continue;
        if (!pair_pattern_holds(spec, clusters.label, n, tol)) return false;
    }
    return true;
}

}  // namespace

bool validate_geometrically(const DimensionSpec& spec, double tol) {
    if (!(tol > 0.0)) throw ParameterError("merge tolerance must be positive");
    spec.validate();
    if (!spec.uses_sharing()) return true;
    const auto pts = realize_positions(spec);
    return pattern_holds(spec, cluster_positions(pts, tol), tol);
}

int QfUcaGeometry::element_of(std::span<const int> idx) const {
    if (idx.size() != spec.cells.size()) throw RangeError("logical index has wrong number of levels");
    for (std::size_t n = 0; n < idx.size(); ++n)
        if (idx[n] < 0 || idx[n] >= spec.cells[n]) throw RangeError("index component out of range");
    return logical_map[flatten(spec.cells, idx)];
}

QfUcaGeometry build_geometry(const DimensionSpec& spec, double tol) {
    if (!(tol > 0.0)) throw ParameterError("merge tolerance must be positive");
    spec.validate();
    const auto pts = realize_positions(spec);
    Clustering clusters = cluster_positions(pts, tol);
    if (spec.uses_sharing() && !pattern_holds(spec, clusters, tol))
        throw LayoutError("layout " + describe(spec) + " does not realize its declared sharing pattern");
    QfUcaGeometry g;
    g.spec = spec;
    g.physical = std::move(clusters.centers);
    g.logical_map = std::move(clusters.label);
    return g;
}

QfUcaGeometry build_geometry(const DimensionSpec& spec) { return build_geometry(spec, default_tolerance(spec)); }

}  // namespace qfuca
