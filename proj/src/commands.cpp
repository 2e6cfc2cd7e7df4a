// SPDX-License-Identifier: Apache-2.0
#include "qfuca/commands.hpp"

#include "qfuca/csv.hpp"
#include "qfuca/errors.hpp"
#include "qfuca/layout_io.hpp"
#include "qfuca/parallel.hpp"
#include "qfuca/svg.hpp"

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>

namespace qfuca {

namespace fs = std::filesystem;

namespace {

std::string cells_text(const Dims& cells) {
    std::string s;
    for (std::size_t n = cells.size(); n-- > 0;) s += std::to_string(cells[n]) + (n ? "x" : "");
    return s;
}

std::string radii_text(const std::vector<double>& radii) {
    std::string s;
    for (std::size_t n = radii.size(); n-- > 0;) s += format_number(radii[n]) + (n ? ";" : "");
    return s;
}

std::string mode_text(const std::vector<int>& mode) {
    std::string s;
    for (std::size_t n = mode.size(); n-- > 0;) s += std::to_string(mode[n]) + (n ? ":" : "");
    return s;
}

std::string dim_text(const DimensionSpec& s) { return std::to_string(s.dimension()) + "D"; }

fs::path out_dir(const RunConfig& cfg) { return fs::path(cfg.output_dir); }

void write(const RunConfig& cfg, const std::string& name, const std::string& content, std::ostream& log) {
    const fs::path p = out_dir(cfg) / name;
    write_atomic(p, content);
    log << "wrote " << p.string() << "\n";
}

// Unique file-name labels in enumeration order.
std::vector<std::string> unique_labels(const std::vector<DimensionSpec>& specs) {
    std::vector<std::string> out;
    std::map<std::string, int> seen;
    for (const auto& s : specs) {
        std::string l = layout_label(s);
        const int k = seen[l]++;
        if (k > 0) l += "-" + std::to_string(k + 1);
        out.push_back(l);
    }
    return out;
}

SearchResult search(const RunConfig& cfg, std::size_t budget) {
    return optimize_layout(budget, cfg.types, cfg.caps, cfg.simulation(), cfg.threads);
}

// Best successful ledger entry per dimension, dimension ascending.
std::vector<std::size_t> best_per_dimension(const SearchResult& r) {
    std::map<int, std::size_t> best;
    for (std::size_t i = 0; i < r.ledger.size(); ++i) {
        const auto& c = r.ledger[i];
        if (!c.ok()) continue;
        auto it = best.find(c.spec.dimension());
        if (it == best.end() || better_candidate(c, r.ledger[it->second])) best[c.spec.dimension()] = i;
    }
    std::vector<std::size_t> out;
    for (const auto& [d, i] : best) out.push_back(i);
    return out;
}

std::vector<std::string> split_schemes(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto bar = text.find('|', start);
        std::string item = text.substr(start, bar == std::string::npos ? std::string::npos : bar - start);
        // stray separators left by the INI list splitter
        const auto b = item.find_first_not_of(" ,\t");
        const auto e = item.find_last_not_of(" ,\t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
        if (bar == std::string::npos) break;
        start = bar + 1;
    }
    return out;
}

CsvTable layouts_table() {
    return CsvTable({"index", "label", "dimension", "family", "cells", "radii_m", "n_elements", "n_modes"});
}

}  // namespace

std::string resolve_output_dir(const RunConfig& cfg, const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
    return cfg.output_dir;
}

DimensionSpec resolve_layout(const RunConfig& cfg) {
    if (!cfg.file.empty() && !cfg.inline_spec.empty())
        throw ConfigError("give either layout.file or layout.inline, not both");
    if (!cfg.file.empty()) return load_layout(cfg.file);
    if (!cfg.inline_spec.empty()) return parse_inline_layout(cfg.inline_spec, cfg.entire_radius_m);
    const auto r = search(cfg, cfg.budget);
    return r.best_candidate().spec;
}

std::vector<DimensionSpec> resolve_schemes(const RunConfig& cfg) {
    std::vector<DimensionSpec> out;
    if (cfg.schemes == "family") {
        const auto r = search(cfg, cfg.budget);
        for (std::size_t i : best_per_dimension(r)) out.push_back(r.ledger[i].spec);
        return out;
    }
    for (const auto& s : split_schemes(cfg.schemes)) out.push_back(parse_inline_layout(s, cfg.entire_radius_m));
    if (out.empty()) throw ConfigError("layout.schemes names no layout");
    return out;
}

void cmd_layouts(const RunConfig& cfg, std::ostream& log) {
    EnumerationStats stats;
    const auto specs = enumerate_layouts(cfg.budget, cfg.types, cfg.caps, cfg.entire_radius_m, &stats);
    const auto labels = unique_labels(specs);
    auto table = layouts_table();
    // SVGs and layout files are independent; geometry is rebuilt per candidate
    const auto geos = parallel_map(specs.size(), [&](std::size_t i) { return build_geometry(specs[i]); }, cfg.threads);
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto& s = specs[i];
        table.add_row({std::to_string(i), labels[i], std::to_string(s.dimension()), to_string(s.family()),
                       cells_text(s.cells), radii_text(s.radii), std::to_string(geos[i].n_elements()),
                       std::to_string(s.n_modes())});
        write_atomic(out_dir(cfg) / "layouts" / (labels[i] + ".layout"), format_layout(s));
        write_atomic(out_dir(cfg) / "layouts" / (labels[i] + ".svg"), layout_svg(geos[i]));
    }
    write(cfg, "layouts.csv", table.str(), log);
    log << "budget " << cfg.budget << ": " << specs.size() << " layouts (" << stats.examined << " candidates examined, "
        << stats.feasible << " feasible at any element count)\n";
    for (std::size_t i = 0; i < specs.size(); ++i)
        log << "  " << std::left << std::setw(28) << labels[i] << " " << describe(specs[i]) << ", "
            << geos[i].n_elements() << " elements, " << specs[i].n_modes() << " modes\n" << std::right;
}

void cmd_build(const RunConfig& cfg, std::ostream& log) {
    const DimensionSpec spec = resolve_layout(cfg);
    if (!satisfies_layout_conditions(spec))
        throw LayoutError(describe(spec) + " does not satisfy its layout-type conditions");
    const QfUcaGeometry geo = build_geometry(spec);

    std::vector<int> multiplicity(geo.n_elements(), 0);
    for (int e : geo.logical_map) ++multiplicity[e];
    CsvTable elements({"element", "x_m", "y_m", "multiplicity"});
    for (std::size_t e = 0; e < geo.n_elements(); ++e)
        elements.add_row({std::to_string(e), format_number(geo.physical[e].x()), format_number(geo.physical[e].y()),
                          std::to_string(multiplicity[e])});
    CsvTable map({"logical", "index", "element"});
    for (std::size_t i = 0; i < geo.logical_map.size(); ++i) {
        const auto idx = unflatten(spec.cells, i);
        map.add_row({std::to_string(i), mode_text(idx), std::to_string(geo.logical_map[i])});
    }
    write(cfg, "geometry.csv", elements.str(), log);
    write(cfg, "logical_map.csv", map.str(), log);
    write(cfg, "layout.layout", format_layout(spec), log);
    write(cfg, "layout.svg", layout_svg(geo), log);
    log << describe(spec) << ": " << geo.n_elements() << " physical elements, " << spec.n_modes() << " modes\n";
}

void cmd_simulate(const RunConfig& cfg, std::ostream& log) {
    const DimensionSpec spec = resolve_layout(cfg);
    const SimulationParams params = cfg.simulation();
    const QfUcaGeometry geo = build_geometry(spec);
    const Evaluation ev = evaluate_full(spec, params);

    CsvTable modes({"mode", "flat", "gain2", "power_w", "noise_w", "snr", "rate_bits_per_hz", "live"});
    for (std::size_t i = 0; i < ev.report.modes.size(); ++i) {
        const auto& m = ev.report.modes[i];
        modes.add_row({mode_text(m.mode), std::to_string(i), format_number(m.gain2), format_number(m.power),
                       format_number(m.noise), format_number(m.snr), format_number(m.rate), m.live ? "1" : "0"});
    }
    modes.add_row({"total", "", "", format_number(params.total_power), "", "", format_number(ev.report.total_se),
                   std::to_string(ev.candidate.live_modes)});
    write(cfg, "modes.csv", modes.str(), log);

    CsvTable summary({"label", "n_elements", "n_modes", "live_modes", "se_bits_per_hz", "eoal", "leakage",
                      "reconstruction_error"});
    summary.add_row({layout_label(spec), std::to_string(ev.candidate.n_elements), std::to_string(ev.candidate.n_modes),
                     std::to_string(ev.candidate.live_modes), format_number(ev.candidate.se),
                     format_number(ev.candidate.eoal), format_number(ev.candidate.leakage),
                     format_number(reconstruction_error(ev.precoding))});
    write(cfg, "summary.csv", summary.str(), log);

    log << describe(spec) << ": SE " << format_number(ev.candidate.se) << " bits/s/Hz, EOAL "
        << format_number(ev.candidate.eoal) << ", " << ev.candidate.live_modes << "/" << ev.candidate.n_modes
        << " live modes\n";

    if (cfg.trials == 0) return;
    const double sigma2 = params.noise_variance();
    const NoiseModel noise = cfg.noise(sigma2);
    const Link link = make_link(assemble_H(spec, params.channel, params.distance_mode));
    const std::size_t M = spec.n_modes();
    const CVector<> zero = CVector<>::Zero(static_cast<Eigen::Index>(M));
    const auto per_trial = parallel_map(
        cfg.trials,
        [&](std::size_t t) -> RVector<> {
            return end_to_end(link, zero, noise, t, &geo.logical_map).s_hat.cwiseAbs2();
        },
        cfg.threads);
    RVector<> empirical = RVector<>::Zero(static_cast<Eigen::Index>(M));
    for (const auto& v : per_trial) empirical += v;  // fixed order keeps the sum reproducible
    empirical /= static_cast<double>(cfg.trials);
    const RVector<> analytic = analytic_noise_variance(link.precoding, sigma2);

    CsvTable stats({"mode", "flat", "live", "analytic_var_w", "empirical_var_w", "ratio"});
    for (std::size_t i = 0; i < M; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const bool live = link.precoding.live[i] != 0;
        stats.add_row({mode_text(unflatten(spec.cells, i)), std::to_string(i), live ? "1" : "0",
                       format_number(analytic(ii)), format_number(empirical(ii)),
                       live && analytic(ii) > 0 ? format_number(empirical(ii) / analytic(ii)) : ""});
    }
    write(cfg, "noise_stats.csv", stats.str(), log);
}

void cmd_sweep_snr(const RunConfig& cfg, std::ostream& log) {
    if (cfg.snr_grid.empty()) throw ConfigError("sweep.snr_db is empty");
    const auto schemes = resolve_schemes(cfg);
    const SimulationParams params = cfg.simulation();
    // the precoding does not depend on the SNR: factor once per scheme
    const auto evals =
        parallel_map(schemes.size(), [&](std::size_t i) { return evaluate_full(schemes[i], params); }, cfg.threads);
    const double g_ref = reference_gain2(params.channel, params.reference_distance);

    CsvTable table({"snr_db", "scheme", "se_bits_per_hz"});
    std::vector<Series> series(schemes.size());
    for (std::size_t i = 0; i < schemes.size(); ++i) series[i].name = layout_label(schemes[i]);
    for (double snr : cfg.snr_grid) {
        const double sigma2 = noise_variance_for_snr(snr, params.total_power, g_ref);
        for (std::size_t i = 0; i < schemes.size(); ++i) {
            const auto& ps = evals[i].precoding;
            const RVector<> powers = params.power_split == PowerSplit::live_modes
                                         ? live_power_allocation(params.total_power, ps.live)
                                         : uniform_power_allocation(params.total_power, ps.order());
            const double se =
                spectral_efficiency(ps.dims, ps.gains, powers, sigma2, evals[i].candidate.n_elements, ps.live).total_se;
            table.add_row({format_number(snr), series[i].name, format_number(se)});
            series[i].x.push_back(snr);
            series[i].y.push_back(se);
        }
    }
    write(cfg, "sweep_snr.csv", table.str(), log);
    write(cfg, "sweep_snr.svg", line_plot_svg("Spectral efficiency versus SNR", "SNR (dB)", "SE (bits/s/Hz)", series),
          log);
}

void cmd_sweep_distance(const RunConfig& cfg, std::ostream& log) {
    if (cfg.distance_grid.empty()) throw ConfigError("sweep.distance_m is empty");
    const auto schemes = resolve_schemes(cfg);
    const SimulationParams base = cfg.simulation();
    const std::size_t S = schemes.size();
    const auto se = parallel_map(
        cfg.distance_grid.size() * S,
        [&](std::size_t k) {
            SimulationParams p = base;  // noise stays referenced to reference_distance
            p.channel.distance = cfg.distance_grid[k / S];
            return evaluate_spec(schemes[k % S], p).se;
        },
        cfg.threads);

    CsvTable table({"distance_m", "scheme", "se_bits_per_hz"});
    std::vector<Series> series(S);
    for (std::size_t i = 0; i < S; ++i) series[i].name = layout_label(schemes[i]);
    for (std::size_t k = 0; k < se.size(); ++k) {
        const double d = cfg.distance_grid[k / S];
        table.add_row({format_number(d), series[k % S].name, format_number(se[k])});
        series[k % S].x.push_back(d);
        series[k % S].y.push_back(se[k]);
    }
    write(cfg, "sweep_distance.csv", table.str(), log);
    write(cfg, "sweep_distance.svg",
          line_plot_svg("Spectral efficiency versus distance", "distance (m)", "SE (bits/s/Hz)", series), log);
}

void cmd_optimize(const RunConfig& cfg, std::ostream& log) {
    const SearchResult r = search(cfg, cfg.budget);
    std::vector<DimensionSpec> specs;
    for (const auto& c : r.ledger) specs.push_back(c.spec);
    const auto labels = unique_labels(specs);

    CsvTable ledger({"index", "label", "dimension", "family", "cells", "n_elements", "n_modes", "live_modes",
                     "se_bits_per_hz", "eoal", "leakage", "best", "status"});
    std::vector<Bar> bars;
    for (std::size_t i = 0; i < r.ledger.size(); ++i) {
        const auto& c = r.ledger[i];
        ledger.add_row({std::to_string(i), labels[i], std::to_string(c.spec.dimension()), to_string(c.spec.family()),
                        cells_text(c.spec.cells), std::to_string(c.n_elements), std::to_string(c.n_modes),
                        std::to_string(c.live_modes), format_number(c.se), format_number(c.eoal),
                        format_number(c.leakage), i == r.best ? "1" : "0", c.status});
        if (c.ok()) bars.push_back({dim_text(c.spec), labels[i], c.eoal});
    }
    write(cfg, "ledger.csv", ledger.str(), log);
    write(cfg, "best.layout", format_layout(r.best_candidate().spec), log);
    write(cfg, "eoal.svg",
          bar_chart_svg("EOAL per layout, " + std::to_string(cfg.budget) + " elements", "EOAL (bits/s/Hz per element)",
                        bars),
          log);
    const auto& b = r.best_candidate();
    log << "budget " << cfg.budget << ": " << r.ledger.size() << " layouts evaluated, best " << describe(b.spec)
        << " with SE " << format_number(b.se) << " bits/s/Hz, EOAL " << format_number(b.eoal) << "\n";
}

void cmd_eoal_table(const RunConfig& cfg, std::ostream& log) {
    if (cfg.budgets.empty()) throw ConfigError("layout.budgets is empty");
    CsvTable table({"budget", "dimension", "family", "label", "n_elements", "se_bits_per_hz", "eoal"});
    std::vector<Bar> bars;
    for (std::size_t budget : cfg.budgets) {
        const SearchResult r = search(cfg, budget);
        // best layout per (dimension, family)
        std::map<std::pair<int, std::string>, std::size_t> best;
        for (std::size_t i = 0; i < r.ledger.size(); ++i) {
            const auto& c = r.ledger[i];
            if (!c.ok()) continue;
            const auto key = std::make_pair(c.spec.dimension(), to_string(c.spec.family()));
            auto it = best.find(key);
            if (it == best.end() || better_candidate(c, r.ledger[it->second])) best[key] = i;
        }
        for (const auto& [key, i] : best) {
            const auto& c = r.ledger[i];
            table.add_row({std::to_string(budget), std::to_string(key.first), key.second, layout_label(c.spec),
                           std::to_string(c.n_elements), format_number(c.se), format_number(c.eoal)});
            bars.push_back({std::to_string(budget) + " elements", dim_text(c.spec) + " " + key.second, c.eoal});
            log << "budget " << std::setw(3) << budget << "  " << std::left << std::setw(26) << layout_label(c.spec)
                << std::right << " SE " << format_number(c.se) << "  EOAL " << format_number(c.eoal) << "\n";
        }
    }
    write(cfg, "eoal_table.csv", table.str(), log);
    write(cfg, "eoal_table.svg", bar_chart_svg("EOAL by element budget", "EOAL (bits/s/Hz per element)", bars), log);
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"layouts",        "build",    "simulate",  "sweep-snr",
                                                   "sweep-distance", "optimize", "eoal-table"};
    return names;
}

void run_command(const std::string& name, const RunConfig& cfg, std::ostream& log) {
    if (name == "layouts") return cmd_layouts(cfg, log);
    if (name == "build") return cmd_build(cfg, log);
    if (name == "simulate") return cmd_simulate(cfg, log);
    if (name == "sweep-snr") return cmd_sweep_snr(cfg, log);
    if (name == "sweep-distance") return cmd_sweep_distance(cfg, log);
    if (name == "optimize") return cmd_optimize(cfg, log);
    if (name == "eoal-table") return cmd_eoal_table(cfg, log);
    throw ConfigError("unknown command '" + name + "'");
}

}  // namespace qfuca
