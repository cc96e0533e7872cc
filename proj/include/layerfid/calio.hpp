// Copyright 2026 The layerfid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file    calio.hpp
 * @brief   Snapshot and config files, synthetic snapshots, results CSV and
 *          the best-effort vendor snapshot converter.
 *
 * Snapshot JSON (version 1):
 *
 *     {"version": 1, "backend": "...", "timestamp": "...",
 *      "qubits": [{"index", "t1_us", "t2_us", "readout_e01", "readout_e10",
 *                  "err_1q", "dur_1q_us"?, "dur_meas_us"?}],
 *      "edges":  [{"a", "b", "err_2q", "dur_2q_us"?}]}
 *
 * Unknown fields are ignored; missing durations take the config defaults.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "layerfid/noise.hpp"
#include "layerfid/pipeline.hpp"

namespace lfd {

struct LoadedSnapshot {
  CalibrationSnapshot snapshot;
  std::vector<std::string> warnings;
};

/// Parses, fills default durations, clamps T2 and validates. Throws
/// MalformedSnapshot on syntax or type errors and InvalidCalibration on
/// invariant violations.
LoadedSnapshot parse_snapshot(std::string_view json_text, const DefaultDurations& defaults = {});
LoadedSnapshot load_snapshot(const std::filesystem::path& path, const DefaultDurations& defaults = {});

std::string snapshot_to_json(const CalibrationSnapshot& snapshot);
void save_snapshot(const CalibrationSnapshot& snapshot, const std::filesystem::path& path);

enum class Topology { Line, Grid, Ring };
enum class Regime { T1Dominated, DephasingDominated, Balanced };

std::string_view to_string(Regime regime);
Regime parse_regime(std::string_view text);

struct SynthProfile {
  Topology topology = Topology::Line;
  int rows = 1;      ///< Grid only.
  int size = 4;      ///< Qubit count for line/ring, columns for grid.
  Regime regime = Regime::Balanced;
  double err_1q = 5e-4;     ///< Residual above decoherence, before jitter.
  double err_2q = 5e-3;
  double readout = 0.015;
  std::uint64_t seed = 7;

  /// "line:12", "ring:8", "grid:3x3".
  static SynthProfile from_topology(std::string_view text, Regime regime, std::uint64_t seed);
};

CalibrationSnapshot synth_snapshot(const SynthProfile& profile);

/// Config JSON: {"version": 1, "shape_factors": {"SX": {"Square": ...}, ...},
/// "durations": {"dur_1q_us", "dur_2q_us", "dur_meas_us"},
/// "pauli_weights_1q": [3], "pauli_weights_2q": [15]}; every key optional.
NoiseConfig parse_config(std::string_view json_text);
NoiseConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const NoiseConfig& config);

/// Results CSV with header mode,theta,phi,layout,pulse_sx,pulse_cz,pulse_meas,ns,fidelity,accept.
/// Reals are written with 17 significant digits so reading back is exact.
std::string results_to_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> results_from_csv(std::string_view text);
void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
std::vector<ResultRow> read_results(const std::filesystem::path& path);

struct ConversionReport {
  CalibrationSnapshot snapshot;
  std::vector<std::string> unmapped;
  std::vector<std::string> warnings;
};

/// Best-effort import of a vendor backend-properties JSON document
/// ("qubits": [[{"name", "value", "unit"}...]], "gates": [...]) or a
/// per-qubit calibration CSV export. Unrecognised fields are listed in
/// `unmapped`.
ConversionReport convert_vendor_snapshot(std::string_view text, const DefaultDurations& defaults = {});

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

} // namespace lfd
