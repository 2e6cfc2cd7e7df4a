// SPDX-License-Identifier: Apache-2.0
//
// Run configuration: INI sections [physics], [layout], [noise], [sweep], [run].
// Every key is addressable as "section.key" from the command line.

#pragma once

#include "qfuca/geometry.hpp"
#include "qfuca/modem.hpp"
#include "qfuca/search.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace qfuca {

inline constexpr const char* kOutputDirEnv = "QFUCA_OUTPUT_DIR";

struct RunConfig {
    // [physics]
    double frequency_hz = 5.8e9;
    double beta = 1.0;
    double distance_m = 100.0;
    double reference_distance_m = 100.0;
    double entire_radius_m = 4.0;
    double snr_db = 15.0;
    double total_power_w = 1.0;
    DistanceMode distance_mode = DistanceMode::exact;
    PowerSplit power_split = PowerSplit::live_modes;

    // [layout]
    std::size_t budget = 25;
    std::vector<LayoutKind> types = all_sharing_kinds();
    EnumerationCaps caps;
    std::string file;        // layout description file
    std::string inline_spec; // e.g. "type1:4,8"
    std::string schemes = "family";  // "family" or inline layouts separated by '|'
    std::vector<std::size_t> budgets = {9, 16, 25};

    // [noise]
    NoiseCorrelation correlation = NoiseCorrelation::independent;
    std::uint64_t seed = 1;
    std::size_t trials = 0;

    // [sweep]
    std::vector<double> snr_grid = {0, 5, 10, 15, 20, 25, 30};
    std::vector<double> distance_grid = {50, 100, 150, 200, 300, 400, 500};

    // [run]
    std::string output_dir = "qfuca_out";
    unsigned threads = 1;

    // Throws ConfigError on unknown keys or bad values.
    void set(const std::string& key, const std::string& value);
    void validate() const;

    SimulationParams simulation() const;
    NoiseModel noise(double variance) const;
};

// Defaults, then the INI file (if any), then "key=value" overrides in order.
RunConfig load_config(const std::filesystem::path& file, const std::vector<std::string>& overrides = {});
void apply_override(RunConfig& cfg, const std::string& assignment);

// All keys with their current values, "section.key = value" lines.
std::string dump_config(const RunConfig& cfg);

}  // namespace qfuca
