// SPDX-License-Identifier: Apache-2.0
//
// Layout description files: "key = value" lines, '#' comments.
//
//     dimension = 2
//     level.1.cells = 8          level.1.radius = 2     level.1.offset = 0
//     level.2.cells = 4          level.2.radius = 2     level.2.offset = 0
//     pair.1.type = type1        pair.1.witness = 2 0
//
// Offsets default to the witness half-steps when omitted.

#pragma once

#include "qfuca/geometry.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace qfuca {

std::string format_layout(const DimensionSpec& spec);
DimensionSpec parse_layout(std::string_view text);

void save_layout(const std::filesystem::path& path, const DimensionSpec& spec);
DimensionSpec load_layout(const std::filesystem::path& path);

// Inline form "<type>:<K_N>,...,<K_1>" (e.g. "type1:4,8", "plain:25",
// "type2:1,1:2,2,6" with one level gap per pair). The first equation
// solution is used for every pair.
DimensionSpec parse_inline_layout(std::string_view text, double entire_radius);

// File-name friendly label, e.g. "2D-type1-4x8".
std::string layout_label(const DimensionSpec& spec);

}  // namespace qfuca
