// SPDX-License-Identifier: Apache-2.0
//
// qfuca <command> [options]. Precedence: defaults < --config file < --set
// key=value < dedicated flags; QFUCA_OUTPUT_DIR overrides run.output_dir and
// --out overrides both.

#include "qfuca/commands.hpp"
#include "qfuca/config.hpp"
#include "qfuca/csv.hpp"
#include "qfuca/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

enum Exit { ok = 0, config = 2, infeasible = 3, numerical = 4, io = 5 };

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"N-dimensional quasi-fractal UCA OAM multiplexing simulator"};
    app.require_subcommand(1);

    std::string config_file, out, layout, types, budgets;
    std::vector<std::string> sets;
    std::optional<std::size_t> budget, trials;
    std::optional<double> snr, distance;
    std::optional<unsigned> threads;
    std::optional<std::uint64_t> seed;
    bool print_config = false;

    app.add_option("-c,--config", config_file, "INI configuration file");
    app.add_option("-s,--set", sets, "override a configuration key, section.key=value (repeatable)");
    app.add_option("-o,--out", out, "output directory");
    app.add_option("-b,--budget", budget, "element budget (layout.budget)");
    app.add_option("--snr", snr, "SNR in dB (physics.snr_db)");
    app.add_option("--distance", distance, "link distance in meters (physics.distance_m)");
    app.add_option("-j,--threads", threads, "worker threads, 0 = all (run.threads)");
    app.add_option("--seed", seed, "noise seed (noise.seed)");
    app.add_option("--trials", trials, "Monte-Carlo noise trials (noise.trials)");
    app.add_option("-l,--layout", layout, "layout file, or an inline spec such as type1:4,8");
    app.add_option("-t,--types", types, "sharing types to enumerate, e.g. type1,type4 (layout.types)");
    app.add_option("--budgets", budgets, "budgets for eoal-table, e.g. 9,16,25 (layout.budgets)");
    app.add_flag("--print-config", print_config, "print the resolved configuration before running");

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"layouts", "enumerate layouts for the budget; one layout file and SVG each"},
        {"build", "build one layout: element positions, logical map, SVG"},
        {"simulate", "per-mode gains and rates of one layout; noise statistics when trials > 0"},
        {"sweep-snr", "SE against SNR for each scheme"},
        {"sweep-distance", "SE against link distance for each scheme"},
        {"optimize", "exhaustive layout search: ledger, best layout, EOAL chart"},
        {"eoal-table", "EOAL of the best layout per dimension and type for each budget"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Exit::ok : Exit::config;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        std::vector<std::string> overrides = sets;
        auto flag = [&](const std::string& key, const std::string& value) { overrides.push_back(key + "=" + value); };
        if (budget) flag("layout.budget", std::to_string(*budget));
        if (snr) flag("physics.snr_db", qfuca::format_exact(*snr));
        if (distance) flag("physics.distance_m", qfuca::format_exact(*distance));
        if (threads) flag("run.threads", std::to_string(*threads));
        if (seed) flag("noise.seed", std::to_string(*seed));
        if (trials) flag("noise.trials", std::to_string(*trials));
        if (!types.empty()) flag("layout.types", types);
        if (!budgets.empty()) flag("layout.budgets", budgets);
        if (!layout.empty()) {
            // an existing path is a layout file, anything else an inline spec
            const bool is_file = std::filesystem::exists(layout);
            flag(is_file ? "layout.file" : "layout.inline", layout);
            flag(is_file ? "layout.inline" : "layout.file", "");
        }
        qfuca::RunConfig cfg = qfuca::load_config(config_file, overrides);
        cfg.output_dir = qfuca::resolve_output_dir(cfg, out);
        if (print_config) std::cout << qfuca::dump_config(cfg);
        qfuca::run_command(command, cfg, std::cout);
        return Exit::ok;
    } catch (const qfuca::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return Exit::config;
    } catch (const qfuca::ParameterError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return Exit::config;
    } catch (const qfuca::RangeError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return Exit::config;
    } catch (const qfuca::LayoutError& e) {
        std::cerr << "infeasible layout: " << e.what() << "\n";
        return Exit::infeasible;
    } catch (const qfuca::ToleranceError& e) {
        std::cerr << "infeasible layout: " << e.what() << "\n";
        return Exit::infeasible;
    } catch (const qfuca::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return Exit::io;
    } catch (const qfuca::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return Exit::numerical;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return Exit::io;
    }
}
