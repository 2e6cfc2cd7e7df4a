// SPDX-License-Identifier: Apache-2.0
#include "qfuca/geometry.hpp"

#include "qfuca/errors.hpp"

#include <cmath>
#include <sstream>

namespace qfuca {

std::string to_string(LayoutKind kind) {
    switch (kind) {
        case LayoutKind::plain: return "plain";
        case LayoutKind::unconstrained: return "free";
        case LayoutKind::shared_center: return "type1";
        case LayoutKind::mixed: return "type2";
        case LayoutKind::intersecting: return "type3";
        case LayoutKind::tangential: return "type4";
    }
    return "?";
}

std::string to_string(const LayoutType& type) {
    if (type.kind == LayoutKind::mixed) return "type2:" + std::to_string(type.ra);
    return to_string(type.kind);
}

LayoutKind parse_layout_kind(std::string_view text) {
    if (text == "plain" || text == "1d") return LayoutKind::plain;
    if (text == "free" || text == "none") return LayoutKind::unconstrained;
    if (text == "type1" || text == "1") return LayoutKind::shared_center;
    if (text == "type2" || text == "2") return LayoutKind::mixed;
    if (text == "type3" || text == "3") return LayoutKind::intersecting;
    if (text == "type4" || text == "4") return LayoutKind::tangential;
    throw ParameterError("unknown layout type '" + std::string(text) + "'");
}

LayoutType parse_layout_type(std::string_view text) {
    auto colon = text.find(':');
    LayoutType t{parse_layout_kind(text.substr(0, colon)), 0};
    if (colon != std::string_view::npos) {
        if (t.kind != LayoutKind::mixed) throw ParameterError("only type2 takes a level gap: '" + std::string(text) + "'");
        std::string rest(text.substr(colon + 1));
        std::size_t used = 0;
        int ra = 0;
        try {
            ra = std::stoi(rest, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != rest.size()) throw ParameterError("bad level gap in '" + std::string(text) + "'");
        t.ra = ra;
    } else if (t.kind == LayoutKind::mixed) {
        throw ParameterError("type2 needs a level gap, e.g. type2:1");
    }
    return t;
}

int type_number(LayoutKind kind) {
    switch (kind) {
        case LayoutKind::shared_center: return 1;
        case LayoutKind::mixed: return 2;
        case LayoutKind::intersecting: return 3;
        case LayoutKind::tangential: return 4;
        default: return 0;
    }
}

std::vector<LayoutKind> all_sharing_kinds() {
    return {LayoutKind::shared_center, LayoutKind::mixed, LayoutKind::intersecting, LayoutKind::tangential};
}

double DimensionSpec::entire_radius() const {
    double s = 0.0;
    for (double r : radii) s += r;
    return s;
}

LayoutKind DimensionSpec::family() const {
    if (pairs.empty()) return dimension() <= 1 ? LayoutKind::plain : LayoutKind::unconstrained;
    for (const auto& p : pairs)
        if (p.kind != pairs.front().kind) return LayoutKind::unconstrained;
    return pairs.front().kind;
}

bool DimensionSpec::uses_sharing() const {
    for (const auto& p : pairs)
        if (type_number(p.kind) != 0) return true;
    return false;
}

void DimensionSpec::validate() const {
    const int N = dimension();
    if (N < 1) throw ParameterError("layout needs at least one level");
    if (radii.size() != cells.size()) throw ParameterError("one radius per level required");
    if (offsets.size() != cells.size()) throw ParameterError("one offset per level required");
    if (pairs.size() != cells.size() - 1 || witnesses.size() != pairs.size())
        throw ParameterError("one layout type and witness per adjacent level pair required");
    for (int n = 0; n < N; ++n) {
        const int minimum = (N == 1) ? 1 : 2;
        if (cells[n] < minimum)
            throw ParameterError("level " + std::to_string(n + 1) + " has " + std::to_string(cells[n]) + " cells (minimum " +
                                 std::to_string(minimum) + ")");
        if (!(radii[n] > 0.0) || !std::isfinite(radii[n]))
            throw ParameterError("level " + std::to_string(n + 1) + " radius must be positive");
        if (!std::isfinite(offsets[n])) throw ParameterError("non-finite offset");
    }
    for (int n = 1; n < N; ++n) {
        const auto& t = pairs[n - 1];
        if (t.kind == LayoutKind::plain) throw ParameterError("plain layout is only valid for a single level");
        if (t.kind == LayoutKind::mixed && (t.ra < 1 || t.ra > N - n))
            throw ParameterError("type2 level gap " + std::to_string(t.ra) + " outside [1, " + std::to_string(N - n) +
                                 "] at level " + std::to_string(n));
    }
}

DimensionSpec plain_spec(int elements, double radius) {
    DimensionSpec s;
    s.cells = {elements};
    s.radii = {radius};
    s.offsets = {0.0};
    s.validate();
    return s;
}

DimensionSpec unconstrained_spec(Dims cells, std::vector<double> radii) {
    DimensionSpec s;
    s.cells = std::move(cells);
    s.radii = std::move(radii);
    s.offsets.assign(s.cells.size(), 0.0);
    if (!s.cells.empty()) {
        s.pairs.assign(s.cells.size() - 1, LayoutType{LayoutKind::unconstrained, 0});
        s.witnesses.assign(s.cells.size() - 1, Witness{});
    }
    s.validate();
    return s;
}

std::string describe(const DimensionSpec& spec) {
    std::ostringstream os;
    os << spec.dimension() << "D ";
    const LayoutKind fam = spec.family();
    if (fam == LayoutKind::mixed) {
        os << "type2[ra=";
        for (std::size_t i = 0; i < spec.pairs.size(); ++i) os << (i ? "," : "") << spec.pairs[i].ra;
        os << "]";
    } else {
        os << to_string(fam);
    }
    os << " K=(";
    for (int n = spec.dimension(); n-- > 0;) os << spec.cells[n] << (n ? "," : "");
    os << ")";
    return os.str();
}

namespace {

void check_index(const DimensionSpec& spec, std::span<const int> idx) {
    if (idx.size() != spec.cells.size()) throw RangeError("logical index has wrong number of levels");
    for (std::size_t n = 0; n < idx.size(); ++n)
        if (idx[n] < 0 || idx[n] >= spec.cells[n])
            throw RangeError("index component k_" + std::to_string(n + 1) + " = " + std::to_string(idx[n]) +
                             " out of range [0, " + std::to_string(spec.cells[n]) + ")");
}

}  // namespace

std::vector<double> level_azimuths(const DimensionSpec& spec, std::span<const int> idx) {
    check_index(spec, idx);
    std::vector<double> a(spec.cells.size());
    double acc = 0.0;
    for (std::size_t n = spec.cells.size(); n-- > 0;) {
        acc += spec.offsets[n] + 2.0 * kPi * idx[n] / spec.cells[n];
        a[n] = acc;
    }
    return a;
}

Point position_of(const DimensionSpec& spec, std::span<const int> idx) {
    const auto a = level_azimuths(spec, idx);
    Point p = Point::Zero();
    for (std::size_t n = 0; n < a.size(); ++n) p += spec.radii[n] * Point(std::cos(a[n]), std::sin(a[n]));
    return p;
}

namespace {

void realize_level(const DimensionSpec& spec, int n, double azimuth, const Point& origin, std::size_t flat_base,
                   std::vector<Point>& out) {
    const int K = spec.cells[n];
    std::size_t stride = 1;
    for (int m = 0; m < n; ++m) stride *= static_cast<std::size_t>(spec.cells[m]);
    for (int k = 0; k < K; ++k) {
        const double a = azimuth + (spec.offsets[n] + 2.0 * kPi * k / K);
        const Point p = origin + spec.radii[n] * Point(std::cos(a), std::sin(a));
        const std::size_t flat = flat_base + static_cast<std::size_t>(k) * stride;
        if (n == 0)
            out[flat] = p;
        else
            realize_level(spec, n - 1, a, p, flat, out);
    }
}

}  // namespace

std::vector<Point> realize_positions(const DimensionSpec& spec) {
    spec.validate();
    std::vector<Point> out(spec.n_modes());
    realize_level(spec, spec.dimension() - 1, 0.0, Point::Zero(), 0, out);
    return out;
}

}  // namespace qfuca
