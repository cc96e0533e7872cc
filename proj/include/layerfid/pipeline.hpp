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
 * @file    pipeline.hpp
 * @brief   Fidelity attribution over the pipeline layers: runs, bands,
 *          layer contributions, waterfalls, filter cascades, pulse-shape
 *          isolation and noise-scale sweeps.
 *
 * Layer names follow the decision order: L1 state preparation and encoding
 * mode, L2 qubit selection, L3 pulse-shape assignment.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "layerfid/circuits.hpp"
#include "layerfid/layout.hpp"
#include "layerfid/noise.hpp"

namespace lfd {

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Explicit layout, or thresholds from which the minimum-score layout is
/// selected (3-qubit path for physical mode, subgraph match for encoded).
using LayoutSource = std::variant<LayoutCandidate, FilterThresholds>;

struct PipelineConfig {
  TeleportMode mode = TeleportMode::Physical;
  StatePrep prep;
  LayoutSource layout = FilterThresholds{};
  PulseAssignment pulse;
  NoiseScale ns;
};

/// Shared knobs that are not part of a pipeline decision.
struct PipelineContext {
  NoiseConfig noise;
  std::uint64_t seed = kDefaultSeed;
};

struct RunResult {
  double fidelity = 0.0;
  double accept = 0.0;
  LayoutCandidate layout;
  double throughput() const { return fidelity * accept; }
};

struct BandReport {
  std::size_t n_configs = 0;
  double f_best = 0.0;
  double f_worst = 0.0;
  /// (reference_best or f_best) - f_worst, floored at 0.
  double band = 0.0;
  std::optional<double> reference_best;
};

struct LayerContribution {
  std::string layer;
  double c = 0.0;
};

struct WaterfallReport {
  double f_baseline = 0.0;
  double f_after_l2 = 0.0;
  double f_after_l3 = 0.0;
  double delta_l2 = 0.0;
  double delta_l3 = 0.0;
  double total = 0.0;
  LayoutCandidate baseline_layout;
  LayoutCandidate l2_layout;
  PulseAssignment l3_pulse;
};

struct WaterfallOptions {
  TeleportMode mode = TeleportMode::Physical;
  NoiseScale ns;
  /// The baseline takes the first admissible layout in sorted order.
  FilterThresholds baseline_thresholds;
  /// L2 takes the minimum-score layout under these.
  FilterThresholds l2_thresholds;
};

struct CascadeRow {
  FilterThresholds thresholds;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::size_t path_count = 0;
  /// Empty when the stage admits no path.
  std::optional<BandReport> stats;
};

struct PulseScore {
  PulseAssignment pulse;
  double fidelity = 0.0;
  double accept = 0.0;
};

struct L3Report {
  /// All 27 assignments in all_pulse_assignments() order.
  std::vector<PulseScore> assignments;
  double f_all_square = 0.0;
  double f_all_gaussian = 0.0;
  double f_all_drag = 0.0;
  /// First maximum in assignment order.
  PulseScore best;
};

struct SweepRow {
  StatePrep prep;
  double ns = 0.0;
  double f_phys = 0.0;
  double f_log = 0.0;
  double accept = 0.0;
  double accept_phys = 1.0;
  LayoutCandidate phys_layout;
  LayoutCandidate log_layout;
};

struct SweepOptions {
  FilterThresholds thresholds;
  PulseAssignment pulse = PulseAssignment::per_gate_default();
};

/// One row of the results CSV.
struct ResultRow {
  TeleportMode mode = TeleportMode::Physical;
  double theta = 0.0;
  double phi = 0.0;
  std::string layout;
  PulseAssignment pulse;
  double ns = 0.0;
  double fidelity = 0.0;
  double accept = 0.0;
  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

/// Picks the layout a config runs on without simulating anything.
LayoutCandidate resolve_layout(TeleportMode mode, const LayoutSource& source,
                               const CalibrationSnapshot& snapshot, std::uint64_t seed = kDefaultSeed);

/// All admissible layouts under `th` in deterministic order (paths for
/// physical mode, embeddings for encoded mode), each scored.
std::vector<LayoutCandidate> admissible_layouts(TeleportMode mode, const FilterThresholds& th,
                                                const CalibrationSnapshot& snapshot);

RunResult run(const PipelineConfig& config, const CalibrationSnapshot& snapshot,
              const PipelineContext& ctx = {});

/// Throws EmptySweep for an empty list.
BandReport ablation_band(const std::vector<PipelineConfig>& configs, const CalibrationSnapshot& snapshot,
                         std::optional<double> reference_best = std::nullopt,
                         const PipelineContext& ctx = {});

/// Band from already-computed fidelities.
BandReport band_of(const std::vector<double>& fidelities, std::optional<double> reference_best);

/// Throws ReferenceMismatch unless both reports carry the same reference.
LayerContribution layer_contribution(const BandReport& before, const BandReport& after,
                                     std::string layer = {});

WaterfallReport waterfall(const StatePrep& prep, const CalibrationSnapshot& snapshot,
                          const WaterfallOptions& options = {}, const PipelineContext& ctx = {});

/// Runs every path surviving each stage with uniform Square pulses.
std::vector<CascadeRow> filter_cascade(const CalibrationSnapshot& snapshot,
                                       const std::vector<FilterThresholds>& stages, const StatePrep& prep,
                                       std::optional<double> reference_best = std::nullopt,
                                       NoiseScale ns = NoiseScale(1.0), const PipelineContext& ctx = {});

L3Report l3_isolation(const CalibrationSnapshot& snapshot, const LayoutCandidate& layout,
                      const StatePrep& prep, NoiseScale ns, TeleportMode mode = TeleportMode::Physical,
                      const PipelineContext& ctx = {});

/// Three-stage ablation: all layouts with AllSquare, the best layout with
/// L3 varying over the uniforms plus the per-gate optimum, and both fixed.
/// All three bands share the final configuration's fidelity as reference.
struct AblationLadder {
  BandReport baseline;
  BandReport l2_fixed;
  BandReport both_fixed;
  LayerContribution c_l2;
  LayerContribution c_l3;
  LayoutCandidate best_layout;
  PulseAssignment best_pulse;
};

AblationLadder ablation_ladder(const CalibrationSnapshot& snapshot, const StatePrep& prep,
                               const FilterThresholds& th, NoiseScale ns = NoiseScale(1.0),
                               TeleportMode mode = TeleportMode::Physical, const PipelineContext& ctx = {});

/// Throws InvalidArgument unless `scales` is sorted ascending.
std::vector<SweepRow> noise_sweep(const CalibrationSnapshot& snapshot, const std::vector<StatePrep>& preps,
                                  const std::vector<double>& scales, const SweepOptions& options = {},
                                  const PipelineContext& ctx = {});

/// Two CSV rows (physical, encoded) per sweep row.
std::vector<ResultRow> to_result_rows(const std::vector<SweepRow>& rows, const PulseAssignment& pulse);

/// Runs f(i) for i in [0, n) on a worker pool and returns results in index
/// order. The first exception (lowest index) is rethrown.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& f);

} // namespace lfd

#include "layerfid/detail/parallel.hpp"
