// SPDX-License-Identifier: Apache-2.0
#include "qfuca/layout_io.hpp"

#include "qfuca/csv.hpp"
#include "qfuca/errors.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace qfuca {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

int to_int(const std::string& key, const std::string& v) {
    int out = 0;
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end) throw ConfigError("layout key '" + key + "': expected an integer, got '" + v + "'");
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end || !std::isfinite(out))
        throw ConfigError("layout key '" + key + "': expected a number, got '" + v + "'");
    return out;
}

std::vector<int> int_list(std::string_view text, char sep, const std::string& what) {
    std::vector<int> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find(sep, start);
        const std::string item = trim(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        if (item.empty()) throw ConfigError("empty entry in " + what);
        out.push_back(to_int(what, item));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return out;
}

}  // namespace

std::string format_layout(const DimensionSpec& spec) {
    spec.validate();
    std::ostringstream os;
    os << "# " << describe(spec) << "\n";
    os << "dimension = " << spec.dimension() << "\n";
    for (int n = 1; n <= spec.dimension(); ++n) {
        os << "level." << n << ".cells = " << spec.cells[n - 1] << "\n";
        os << "level." << n << ".radius = " << format_exact(spec.radii[n - 1]) << "\n";
        os << "level." << n << ".offset = " << format_exact(spec.offsets[n - 1]) << "\n";
    }
    for (int n = 1; n < spec.dimension(); ++n) {
        os << "pair." << n << ".type = " << to_string(spec.pairs[n - 1]) << "\n";
        os << "pair." << n << ".witness = " << spec.witnesses[n - 1].odd << " " << spec.witnesses[n - 1].even << "\n";
    }
    return os.str();
}

DimensionSpec parse_layout(std::string_view text) {
    std::map<std::string, std::string> kv;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError("layout line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        if (kv.count(key)) throw ConfigError("layout key '" + key + "' repeated");
        kv[key] = trim(t.substr(eq + 1));
    }
    auto take = [&](const std::string& key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end()) throw ConfigError("layout is missing '" + key + "'");
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    const int N = to_int("dimension", take("dimension"));
    if (N < 1 || N > 16) throw ConfigError("layout dimension must be in [1, 16]");
    DimensionSpec s;
    std::vector<bool> explicit_offset(static_cast<std::size_t>(N), false);
    for (int n = 1; n <= N; ++n) {
        const std::string p = "level." + std::to_string(n) + ".";
        s.cells.push_back(to_int(p + "cells", take(p + "cells")));
        s.radii.push_back(to_double(p + "radius", take(p + "radius")));
        if (kv.count(p + "offset")) {
            s.offsets.push_back(to_double(p + "offset", take(p + "offset")));
            explicit_offset[n - 1] = true;
        } else {
            s.offsets.push_back(0.0);
        }
    }
    for (int n = 1; n < N; ++n) {
        const std::string p = "pair." + std::to_string(n) + ".";
        try {
            s.pairs.push_back(parse_layout_type(take(p + "type")));
        } catch (const ParameterError& e) {
            throw ConfigError(p + "type: " + e.what());
        }
        Witness w;
        if (kv.count(p + "witness")) {
            std::istringstream ws(take(p + "witness"));
            if (!(ws >> w.odd >> w.even)) throw ConfigError(p + "witness: expected two integers");
            std::string extra;
            if (ws >> extra) throw ConfigError(p + "witness: expected two integers");
        }
        s.witnesses.push_back(w);
        if (!explicit_offset[n - 1] && type_number(s.pairs.back().kind) != 0) s.offsets[n - 1] = ring_offset(s.cells[n - 1], w);
    }
    if (!kv.empty()) throw ConfigError("unknown layout key '" + kv.begin()->first + "'");
    try {
        s.validate();
    } catch (const ParameterError& e) {
        throw ConfigError(std::string("invalid layout: ") + e.what());
    }
    return s;
}

void save_layout(const std::filesystem::path& path, const DimensionSpec& spec) { write_atomic(path, format_layout(spec)); }

DimensionSpec load_layout(const std::filesystem::path& path) {
    try {
        return parse_layout(read_text(path));
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

DimensionSpec parse_inline_layout(std::string_view text, double entire_radius) {
    const std::string t = trim(text);
    const auto colon = t.find(':');
    if (colon == std::string::npos) throw ConfigError("inline layout '" + t + "' needs the form <type>:<K_N>,...,<K_1>");
    const std::string kind_text = t.substr(0, colon);
    LayoutKind kind;
    try {
        kind = parse_layout_kind(kind_text);
    } catch (const ParameterError& e) {
        throw ConfigError(e.what());
    }
    std::string rest = t.substr(colon + 1);
    std::vector<int> gaps;
    if (kind == LayoutKind::mixed) {
        const auto c2 = rest.find(':');
        if (c2 == std::string::npos) throw ConfigError("type2 inline layout needs level gaps: type2:<ra_1>,...:<K_N>,...");
        gaps = int_list(rest.substr(0, c2), ',', "level gaps");
        rest = rest.substr(c2 + 1);
    }
    std::vector<int> outer_first = int_list(rest, ',', "cell counts");
    Dims cells(outer_first.rbegin(), outer_first.rend());
    try {
        if (kind == LayoutKind::plain) {
            if (cells.size() != 1) throw ConfigError("plain layout takes a single cell count");
            return plain_spec(cells[0], entire_radius);
        }
        if (cells.size() < 2) throw ConfigError("multi-level layout needs at least two cell counts");
        if (kind == LayoutKind::unconstrained) {
            // equal radii, no sharing claim
            const double r = entire_radius / static_cast<double>(cells.size());
            return unconstrained_spec(cells, std::vector<double>(cells.size(), r));
        }
        const std::size_t P = cells.size() - 1;
        if (kind == LayoutKind::mixed && gaps.size() != P)
            throw ConfigError("type2 inline layout needs " + std::to_string(P) + " level gaps");
        std::vector<LayoutType> pairs;
        std::vector<PairSolution> chosen;
        for (std::size_t n = 0; n < P; ++n) {
            pairs.push_back(LayoutType{kind, kind == LayoutKind::mixed ? gaps[n] : 0});
            const auto sols = solve_layout_pair(pairs.back(), cells[n], cells[n + 1]);
            if (sols.empty())
                throw LayoutError("no " + to_string(pairs.back()) + " solution for K_" + std::to_string(n + 1) + "=" +
                                  std::to_string(cells[n]) + ", K_" + std::to_string(n + 2) + "=" +
                                  std::to_string(cells[n + 1]));
            chosen.push_back(sols.front());
        }
        return sharing_spec(cells, pairs, chosen, entire_radius);
    } catch (const ParameterError& e) {
        throw ConfigError(std::string("invalid inline layout: ") + e.what());
    }
}

std::string layout_label(const DimensionSpec& spec) {
    std::ostringstream os;
    os << spec.dimension() << "D-";
    const LayoutKind fam = spec.family();
    os << to_string(fam);
    if (fam == LayoutKind::mixed) {
        os << "r";
        for (std::size_t i = 0; i < spec.pairs.size(); ++i) os << (i ? "." : "") << spec.pairs[i].ra;
    }
    os << "-";
    for (int n = spec.dimension(); n-- > 0;) os << spec.cells[n] << (n ? "x" : "");
    // witness suffix keeps labels unique when a K tuple admits several solutions
    bool nonzero = false;
    for (const auto& w : spec.witnesses) nonzero = nonzero || w.odd != 0 || w.even != 0;
    if (nonzero && fam == LayoutKind::intersecting) {
        os << "-w";
        for (std::size_t i = 0; i < spec.witnesses.size(); ++i)
            os << (i ? "." : "") << spec.witnesses[i].odd << "_" << spec.witnesses[i].even;
    }
    return os.str();
}

}  // namespace qfuca
