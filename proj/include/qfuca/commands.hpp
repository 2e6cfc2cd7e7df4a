// SPDX-License-Identifier: Apache-2.0
//
// CLI subcommands. Each writes its CSV/SVG/layout outputs under
// cfg.output_dir and a short human-readable summary to `log`.

#pragma once

#include "qfuca/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace qfuca {

// config < environment variable < explicit flag.
std::string resolve_output_dir(const RunConfig& cfg, const std::string& flag);

// The single layout named by layout.file or layout.inline; without either,
// the optimizer's choice for layout.budget.
DimensionSpec resolve_layout(const RunConfig& cfg);

// layout.schemes: "family" (best layout per dimension at layout.budget) or
// inline layouts separated by '|'.
std::vector<DimensionSpec> resolve_schemes(const RunConfig& cfg);

void cmd_layouts(const RunConfig& cfg, std::ostream& log);
void cmd_build(const RunConfig& cfg, std::ostream& log);
void cmd_simulate(const RunConfig& cfg, std::ostream& log);
void cmd_sweep_snr(const RunConfig& cfg, std::ostream& log);
void cmd_sweep_distance(const RunConfig& cfg, std::ostream& log);
void cmd_optimize(const RunConfig& cfg, std::ostream& log);
void cmd_eoal_table(const RunConfig& cfg, std::ostream& log);

const std::vector<std::string>& command_names();
void run_command(const std::string& name, const RunConfig& cfg, std::ostream& log);

}  // namespace qfuca
