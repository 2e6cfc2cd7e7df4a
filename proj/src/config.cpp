// SPDX-License-Identifier: Apache-2.0
#include "qfuca/config.hpp"

#include "qfuca/csv.hpp"
#include "qfuca/errors.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace qfuca {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double as_double(const std::string& key, const std::string& v) {
    double x = 0.0;
    const std::string t = trim(v);
    const char* end = t.data() + t.size();
    auto [p, ec] = std::from_chars(t.data(), end, x);
    if (ec != std::errc() || p != end || !std::isfinite(x)) throw ConfigError(key + ": expected a number, got '" + v + "'");
    return x;
}

template <typename Int>
Int as_int(const std::string& key, const std::string& v) {
    Int x = 0;
    const std::string t = trim(v);
    const char* end = t.data() + t.size();
    auto [p, ec] = std::from_chars(t.data(), end, x);
    if (ec != std::errc() || p != end) throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
    return x;
}

double positive(const std::string& key, const std::string& v) {
    const double x = as_double(key, v);
    if (!(x > 0)) throw ConfigError(key + " must be positive");
    return x;
}

std::string join(const std::vector<std::string>& items, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
    return out;
}

template <typename T, typename F>
std::string join_map(const std::vector<T>& v, F&& f) {
    std::vector<std::string> s;
    for (const auto& x : v) s.push_back(f(x));
    return join(s, ",");
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Key {
    Setter set;
    Getter get;
};

const std::map<std::string, Key>& keys() {
    static const std::map<std::string, Key> table = {
        {"physics.frequency_hz",
         {[](RunConfig& c, const std::string& k, const std::string& v) { c.frequency_hz = positive(k, v); },
          [](const RunConfig& c) { return format_number(c.frequency_hz); }}},
        {"physics.beta",
         {[](RunConfig& c, const std::string& k, const std::string& v) { c.beta = positive(k, v); },
          [](const RunConfig& c) { return format_number(c.beta); }}},
        {"physics.distance_m",
         {[](RunConfig& c, const std::string& k, const std::string& v) { c.distance_m = positive(k, v); },
          [](const RunConfig& c) { return format_number(c.distance_m); }}},
        {"physics.reference_distance_m",
         {[](RunConfig& c, const std::string& k, const std::string& v) { c.reference_distance_m = positive(k, v); },
          [](const RunConfig& c) { return format_number(c.reference_distance_m); }}},
        {"physics.entire_radius_m",
         {[](RunConfig& c, const std::string& k, const std::string& v) { c.entire_radius_m = positive(k, v); },
          [](const RunConfig& c) { return format_number(c.entire_radius_m); }}},
        {"physics.snr_db",
         {[](RunConfig& c, const std::string& k, const std::string& v) { c.snr_db = as_double(k, v); },
          [](const RunConfig& c) { return format_number(c.snr_db); }}},
        {"physics.total_power_w",
         {[](RunConfig& c, const std::string& k, const std::string& v) { c.total_power_w = positive(k, v); },
          [](const RunConfig& c) { return format_number(c.total_power_w); }}},
        {"physics.distance_mode",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              if (v == "exact") c.distance_mode = DistanceMode::exact;
              else if (v == "approx") c.distance_mode = DistanceMode::approx;
              else throw ConfigError(k + ": expected exact or approx");
          },
          [](const RunConfig& c) { return std::string(c.distance_mode == DistanceMode::exact ? "exact" : "approx"); }}},
        {"physics.power_split",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              if (v == "live") c.power_split = PowerSplit::live_modes;
              else if (v == "all") c.power_split = PowerSplit::all_modes;
              else throw ConfigError(k + ": expected live or all");
          },
          [](const RunConfig& c) { return std::string(c.power_split == PowerSplit::live_modes ? "live" : "all"); }}},
        {"layout.budget",
         {[](RunConfig& c, const std::string& k, const std::string& v) { c.budget = as_int<std::size_t>(k, v); },
          [](const RunConfig& c) { return std::to_string(c.budget); }}},
        {"layout.types",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              c.types.clear();
              for (const auto& t : split(v, ',')) {
                  try {
                      const LayoutKind kind = parse_layout_kind(t);
                      if (type_number(kind) == 0) throw ParameterError("'" + t + "' is not a sharing type");
                      c.types.push_back(kind);
                  } catch (const ParameterError& e) {
                      throw ConfigError(k + ": " + e.what());
                  }
              }
          },
          [](const RunConfig& c) { return join_map(c.types, [](LayoutKind t) { return to_string(t); }); }}},
        {"layout.max_dimension",
         {[](RunConfig& c, const std::string& k, const std::string& v) { c.caps.max_dimension = as_int<int>(k, v); },
          [](const RunConfig& c) { return std::to_string(c.caps.max_dimension); }}},
        {"layout.max_cells",
         {[](RunConfig& c, const std::string& k, const std::string& v) { c.caps.max_cells = as_int<int>(k, v); },
          [](const RunConfig& c) { return std::to_string(c.caps.max_cells); }}},
        {"layout.max_modes",
         {[](RunConfig& c, const std::string& k, const std::string& v) { c.caps.max_modes = as_int<std::size_t>(k, v); },
          [](const RunConfig& c) { return std::to_string(c.caps.max_modes); }}},
        {"layout.file",
         {[](RunConfig& c, const std::string&, const std::string& v) { c.file = v; },
          [](const RunConfig& c) { return c.file; }}},
        {"layout.inline",
         {[](RunConfig& c, const std::string&, const std::string& v) { c.inline_spec = v; },
          [](const RunConfig& c) { return c.inline_spec; }}},
        {"layout.schemes",
         {[](RunConfig& c, const std::string&, const std::string& v) { c.schemes = v; },
          [](const RunConfig& c) { return c.schemes; }}},
        {"layout.budgets",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              c.budgets.clear();
              for (const auto& t : split(v, ',')) c.budgets.push_back(as_int<std::size_t>(k, t));
          },
          [](const RunConfig& c) { return join_map(c.budgets, [](std::size_t b) { return std::to_string(b); }); }}},
        {"noise.correlation",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              if (v == "independent") c.correlation = NoiseCorrelation::independent;
              else if (v == "shared") c.correlation = NoiseCorrelation::shared_element;
              else throw ConfigError(k + ": expected independent or shared");
          },
          [](const RunConfig& c) {
              return std::string(c.correlation == NoiseCorrelation::independent ? "independent" : "shared");
          }}},
        {"noise.seed",
         {[](RunConfig& c, const std::string& k, const std::string& v) { c.seed = as_int<std::uint64_t>(k, v); },
          [](const RunConfig& c) { return std::to_string(c.seed); }}},
        {"noise.trials",
         {[](RunConfig& c, const std::string& k, const std::string& v) { c.trials = as_int<std::size_t>(k, v); },
          [](const RunConfig& c) { return std::to_string(c.trials); }}},
        {"sweep.snr_db",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              c.snr_grid.clear();
              for (const auto& t : split(v, ',')) c.snr_grid.push_back(as_double(k, t));
          },
          [](const RunConfig& c) { return join_map(c.snr_grid, [](double x) { return format_number(x); }); }}},
        {"sweep.distance_m",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              c.distance_grid.clear();
              for (const auto& t : split(v, ',')) c.distance_grid.push_back(positive(k, t));
          },
          [](const RunConfig& c) { return join_map(c.distance_grid, [](double x) { return format_number(x); }); }}},
        {"run.output_dir",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              if (v.empty()) throw ConfigError(k + " must not be empty");
              c.output_dir = v;
          },
          [](const RunConfig& c) { return c.output_dir; }}},
        {"run.threads",
         {[](RunConfig& c, const std::string& k, const std::string& v) { c.threads = as_int<unsigned>(k, v); },
          [](const RunConfig& c) { return std::to_string(c.threads); }}},
    };
    return table;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    const auto it = keys().find(key);
    if (it == keys().end()) throw ConfigError("unknown configuration key '" + key + "'");
    it->second.set(*this, key, trim(value));
}

void RunConfig::validate() const {
    if (budget < 1) throw ConfigError("layout.budget must be at least 1");
    if (caps.max_dimension < 1) throw ConfigError("layout.max_dimension must be at least 1");
    if (caps.max_cells < 2) throw ConfigError("layout.max_cells must be at least 2");
    if (caps.max_modes < 1) throw ConfigError("layout.max_modes must be at least 1");
    if (types.empty()) throw ConfigError("layout.types must name at least one type");
    for (std::size_t b : budgets)
        if (b < 1) throw ConfigError("layout.budgets entries must be at least 1");
}

SimulationParams RunConfig::simulation() const {
    SimulationParams p;
    p.channel = ChannelParams::from_frequency(frequency_hz, beta, distance_m);
    p.snr_db = snr_db;
    p.total_power = total_power_w;
    p.reference_distance = reference_distance_m;
    p.entire_radius = entire_radius_m;
    p.distance_mode = distance_mode;
    p.power_split = power_split;
    return p;
}

NoiseModel RunConfig::noise(double variance) const { return NoiseModel{variance, correlation, seed}; }

void apply_override(RunConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not of the form section.key=value");
    cfg.set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

RunConfig load_config(const std::filesystem::path& file, const std::vector<std::string>& overrides) {
    RunConfig cfg;
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) throw IoError("cannot open configuration file " + file.string());
        std::vector<CLI::ConfigItem> items;
        try {
            items = CLI::ConfigINI().from_config(in);
        } catch (const CLI::Error& e) {
            throw ConfigError(file.string() + ": " + e.what());
        }
        for (const auto& item : items) {
            if (item.name == "++" || item.name == "--") continue;  // section markers
            // the INI reader splits on commas and spaces; lists are comma joined again
            const std::string key = join(item.parents, ".") + (item.parents.empty() ? "" : ".") + item.name;
            try {
                cfg.set(key, join(item.inputs, ","));
            } catch (const ConfigError& e) {
                throw ConfigError(file.string() + ": " + e.what());
            }
        }
    }
    for (const auto& o : overrides) apply_override(cfg, o);
    cfg.validate();
    return cfg;
}

std::string dump_config(const RunConfig& cfg) {
    std::string out;
    for (const auto& [key, k] : keys()) out += key + " = " + k.get(cfg) + "\n";
    return out;
}

}  // namespace qfuca
