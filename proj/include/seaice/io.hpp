// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "seaice/driver.hpp"

namespace seaice {

/// Writes text to path via a sibling temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);

/// Snapshot = JSON manifest at `manifest_path` plus a payload file next to
/// it (same stem, ".bin"). The payload holds little-endian float64 values
/// of u_x, u_y, h, A, each nx * ny long in flat-index order, concatenated
/// in manifest order. Byte offsets and counts are recorded per field.
void write_snapshot(const State& s, const std::string& manifest_path);
State read_snapshot(const std::string& manifest_path);

/// Column order of the diagnostics CSV.
const std::vector<std::string>& diagnostic_columns();
/// One header line, then one row per record, doubles with 17 significant digits.
std::string format_diagnostics(const std::vector<DiagRecord>& series);
void write_diagnostics(const std::vector<DiagRecord>& series, const std::string& path);
std::vector<DiagRecord> parse_diagnostics(const std::string& csv_text);

/// printf "%.17g", so text round trips are exact.
std::string format_double(double v);

}  // namespace seaice
