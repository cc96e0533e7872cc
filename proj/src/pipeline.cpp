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

#include "layerfid/pipeline.hpp"

#include <algorithm>

#include "layerfid/error.hpp"

namespace lfd {

namespace {

int mode_qubits(TeleportMode mode) { return mode == TeleportMode::Physical ? 3 : 6; }

LayoutKind mode_kind(TeleportMode mode) {
  return mode == TeleportMode::Physical ? LayoutKind::Path3 : LayoutKind::Subgraph6;
}

RunResult run_on(TeleportMode mode, const StatePrep& prep, const LayoutCandidate& layout,
                 const PulseAssignment& pulse, NoiseScale ns, const CalibrationSnapshot& snapshot,
                 const CouplingGraph& graph, const PipelineContext& ctx) {
  const Circuit native = transpile(build_teleport(mode, prep), layout.mapping, graph);
  const auto outcome = teleport_fidelity(simulate(native, snapshot, pulse, ns, ctx.noise), prep);
  return {outcome.fidelity, outcome.accept, layout};
}

std::size_t first_max(const std::vector<PulseScore>& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i].fidelity > scores[best].fidelity) best = i;
  }
  return best;
}

} // namespace

std::vector<LayoutCandidate> admissible_layouts(TeleportMode mode, const FilterThresholds& th,
                                                const CalibrationSnapshot& snapshot) {
  const CouplingGraph g = filter_graph(snapshot, th);
  const Circuit native = rewrite_native(build_teleport(mode, StatePrep{}));
  std::vector<LayoutCandidate> out;
  if (mode == TeleportMode::Physical) {
    out = enumerate_paths3(g);
  } else {
    for (auto& m : enumerate_embeddings(g, interaction_graph(native))) {
      out.push_back({std::move(m), 0.0, LayoutKind::Subgraph6});
    }
  }
  for (auto& c : out) c.score = score_layout(c, native, snapshot);
  return out;
}

LayoutCandidate resolve_layout(TeleportMode mode, const LayoutSource& source,
                               const CalibrationSnapshot& snapshot, std::uint64_t seed) {
  if (const auto* explicit_layout = std::get_if<LayoutCandidate>(&source)) {
    LayoutCandidate cand = *explicit_layout;
    if (cand.mapping.size() != static_cast<std::size_t>(mode_qubits(mode))) {
      throw Error(ErrorCode::InvalidTargets, std::string(to_string(mode)) + " mode needs a layout of " +
                                                 std::to_string(mode_qubits(mode)) + " qubits");
    }
    for (int p : cand.mapping) snapshot.qubit(p);
    const Circuit logical = build_teleport(mode, StatePrep{});
    transpile(logical, cand.mapping, CouplingGraph::from_snapshot(snapshot));
    cand.kind = mode_kind(mode);
    cand.score = score_layout(cand, rewrite_native(logical), snapshot);
    return cand;
  }
  const auto candidates = admissible_layouts(mode, std::get<FilterThresholds>(source), snapshot);
  if (candidates.empty()) throw Error(ErrorCode::NoEmbedding, "no admissible layout under the thresholds");
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) scores.push_back(c.score);
  return candidates[seeded_argmin(scores, seed)];
}

RunResult run(const PipelineConfig& config, const CalibrationSnapshot& snapshot, const PipelineContext& ctx) {
  const LayoutCandidate layout = resolve_layout(config.mode, config.layout, snapshot, ctx.seed);
  return run_on(config.mode, config.prep, layout, config.pulse, config.ns, snapshot,
                CouplingGraph::from_snapshot(snapshot), ctx);
}

BandReport band_of(const std::vector<double>& fidelities, std::optional<double> reference_best) {
  if (fidelities.empty()) throw Error(ErrorCode::EmptySweep, "band needs at least one configuration");
  BandReport r;
  r.n_configs = fidelities.size();
  const auto [lo, hi] = std::minmax_element(fidelities.begin(), fidelities.end());
  r.f_worst = *lo;
  r.f_best = *hi;
  r.reference_best = reference_best;
  r.band = std::max(0.0, reference_best.value_or(r.f_best) - r.f_worst);
  return r;
}

BandReport ablation_band(const std::vector<PipelineConfig>& configs, const CalibrationSnapshot& snapshot,
                         std::optional<double> reference_best, const PipelineContext& ctx) {
  if (configs.empty()) throw Error(ErrorCode::EmptySweep, "ablation sweep is empty");
  const auto fids = parallel_map<double>(configs.size(), [&](std::size_t i) {
    return run(configs[i], snapshot, ctx).fidelity;
  });
  return band_of(fids, reference_best);
}

LayerContribution layer_contribution(const BandReport& before, const BandReport& after, std::string layer) {
  if (before.reference_best != after.reference_best) {
    throw Error(ErrorCode::ReferenceMismatch, "band reports use different reference fidelities");
  }
  return {std::move(layer), before.band - after.band};
}

WaterfallReport waterfall(const StatePrep& prep, const CalibrationSnapshot& snapshot,
                          const WaterfallOptions& options, const PipelineContext& ctx) {
  const auto baseline_pool = admissible_layouts(options.mode, options.baseline_thresholds, snapshot);
  if (baseline_pool.empty()) throw Error(ErrorCode::NoEmbedding, "no admissible baseline layout");
  const CouplingGraph graph = CouplingGraph::from_snapshot(snapshot);
  const auto square = PulseAssignment::uniform(PulseShape::Square);

  WaterfallReport w;
  w.baseline_layout = baseline_pool.front();
  w.l2_layout = resolve_layout(options.mode, options.l2_thresholds, snapshot, ctx.seed);
  w.f_baseline = run_on(options.mode, prep, w.baseline_layout, square, options.ns, snapshot, graph, ctx).fidelity;
  w.f_after_l2 = run_on(options.mode, prep, w.l2_layout, square, options.ns, snapshot, graph, ctx).fidelity;
  const L3Report l3 = l3_isolation(snapshot, w.l2_layout, prep, options.ns, options.mode, ctx);
  w.l3_pulse = l3.best.pulse;
  w.f_after_l3 = l3.best.fidelity;
  w.delta_l2 = w.f_after_l2 - w.f_baseline;
  w.delta_l3 = w.f_after_l3 - w.f_after_l2;
  w.total = w.f_after_l3 - w.f_baseline;
  return w;
}

std::vector<CascadeRow> filter_cascade(const CalibrationSnapshot& snapshot,
                                       const std::vector<FilterThresholds>& stages, const StatePrep& prep,
                                       std::optional<double> reference_best, NoiseScale ns,
                                       const PipelineContext& ctx) {
  for (std::size_t i = 1; i < stages.size(); ++i) {
    if (!stages[i].at_least_as_tight_as(stages[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "cascade stage " + std::to_string(i) + " loosens a threshold");
    }
  }
  std::vector<CascadeRow> rows;
  std::vector<std::pair<std::size_t, LayoutCandidate>> jobs;
  for (std::size_t s = 0; s < stages.size(); ++s) {
    const CouplingGraph g = filter_graph(snapshot, stages[s]);
    const auto paths = enumerate_paths3(g);
    rows.push_back({stages[s], g.nodes().size(), g.edges().size(), paths.size(), std::nullopt});
    for (const auto& p : paths) jobs.emplace_back(s, p);
  }
  const CouplingGraph graph = CouplingGraph::from_snapshot(snapshot);
  const auto square = PulseAssignment::uniform(PulseShape::Square);
  const auto fids = parallel_map<double>(jobs.size(), [&](std::size_t i) {
    return run_on(TeleportMode::Physical, prep, jobs[i].second, square, ns, snapshot, graph, ctx).fidelity;
  });
  std::vector<std::vector<double>> per_stage(stages.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) per_stage[jobs[i].first].push_back(fids[i]);
  for (std::size_t s = 0; s < stages.size(); ++s) {
    if (!per_stage[s].empty()) rows[s].stats = band_of(per_stage[s], reference_best);
  }
  return rows;
}

L3Report l3_isolation(const CalibrationSnapshot& snapshot, const LayoutCandidate& layout, const StatePrep& prep,
                      NoiseScale ns, TeleportMode mode, const PipelineContext& ctx) {
  const auto pulses = all_pulse_assignments();
  const CouplingGraph graph = CouplingGraph::from_snapshot(snapshot);
  L3Report report;
  report.assignments = parallel_map<PulseScore>(pulses.size(), [&](std::size_t i) {
    const auto r = run_on(mode, prep, layout, pulses[i], ns, snapshot, graph, ctx);
    return PulseScore{pulses[i], r.fidelity, r.accept};
  });
  for (const auto& s : report.assignments) {
    if (s.pulse == PulseAssignment::uniform(PulseShape::Square)) report.f_all_square = s.fidelity;
    if (s.pulse == PulseAssignment::uniform(PulseShape::GaussianSquare)) report.f_all_gaussian = s.fidelity;
    if (s.pulse == PulseAssignment::uniform(PulseShape::DRAG)) report.f_all_drag = s.fidelity;
  }
  report.best = report.assignments[first_max(report.assignments)];
  return report;
}

AblationLadder ablation_ladder(const CalibrationSnapshot& snapshot, const StatePrep& prep,
                               const FilterThresholds& th, NoiseScale ns, TeleportMode mode,
                               const PipelineContext& ctx) {
  const auto layouts = admissible_layouts(mode, th, snapshot);
  if (layouts.empty()) throw Error(ErrorCode::EmptySweep, "no admissible layout to ablate over");
  const CouplingGraph graph = CouplingGraph::from_snapshot(snapshot);
  const auto square = PulseAssignment::uniform(PulseShape::Square);

  AblationLadder ladder;
  ladder.best_layout = resolve_layout(mode, th, snapshot, ctx.seed);
  const L3Report l3 = l3_isolation(snapshot, ladder.best_layout, prep, ns, mode, ctx);
  ladder.best_pulse = l3.best.pulse;
  const double reference = l3.best.fidelity;

  const auto baseline = parallel_map<double>(layouts.size(), [&](std::size_t i) {
    return run_on(mode, prep, layouts[i], square, ns, snapshot, graph, ctx).fidelity;
  });
  ladder.baseline = band_of(baseline, reference);
  ladder.l2_fixed =
      band_of({l3.f_all_square, l3.f_all_gaussian, l3.f_all_drag, l3.best.fidelity}, reference);
  const double fixed =
      run_on(mode, prep, ladder.best_layout, ladder.best_pulse, ns, snapshot, graph, ctx).fidelity;
  ladder.both_fixed = band_of({fixed}, reference);
  ladder.c_l2 = layer_contribution(ladder.baseline, ladder.l2_fixed, "L2");
  ladder.c_l3 = layer_contribution(ladder.l2_fixed, ladder.both_fixed, "L3");
  return ladder;
}

std::vector<SweepRow> noise_sweep(const CalibrationSnapshot& snapshot, const std::vector<StatePrep>& preps,
                                  const std::vector<double>& scales, const SweepOptions& options,
                                  const PipelineContext& ctx) {
  if (!std::is_sorted(scales.begin(), scales.end())) {
    throw Error(ErrorCode::InvalidArgument, "noise scales must be sorted ascending");
  }
  for (const auto& p : preps) p.validate();
  std::vector<NoiseScale> ns;
  for (double s : scales) ns.emplace_back(s);
  const auto phys = resolve_layout(TeleportMode::Physical, options.thresholds, snapshot, ctx.seed);
  const auto logi = resolve_layout(TeleportMode::Encoded, options.thresholds, snapshot, ctx.seed);
  const CouplingGraph graph = CouplingGraph::from_snapshot(snapshot);

  const std::size_t cells = preps.size() * scales.size();
  const auto results = parallel_map<RunResult>(2 * cells, [&](std::size_t i) {
    const std::size_t cell = i / 2;
    const auto& prep = preps[cell / scales.size()];
    const NoiseScale s = ns[cell % scales.size()];
    return i % 2 == 0 ? run_on(TeleportMode::Physical, prep, phys, options.pulse, s, snapshot, graph, ctx)
                      : run_on(TeleportMode::Encoded, prep, logi, options.pulse, s, snapshot, graph, ctx);
  });
  std::vector<SweepRow> rows;
  rows.reserve(cells);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    SweepRow r;
    r.prep = preps[cell / scales.size()];
    r.ns = scales[cell % scales.size()];
    r.f_phys = results[2 * cell].fidelity;
    r.accept_phys = results[2 * cell].accept;
    r.f_log = results[2 * cell + 1].fidelity;
    r.accept = results[2 * cell + 1].accept;
    r.phys_layout = phys;
    r.log_layout = logi;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> to_result_rows(const std::vector<SweepRow>& rows, const PulseAssignment& pulse) {
  std::vector<ResultRow> out;
  out.reserve(rows.size() * 2);
  for (const auto& r : rows) {
    out.push_back({TeleportMode::Physical, r.prep.theta, r.prep.phi, r.phys_layout.label(), pulse, r.ns,
                   r.f_phys, r.accept_phys});
    out.push_back({TeleportMode::Encoded, r.prep.theta, r.prep.phi, r.log_layout.label(), pulse, r.ns, r.f_log,
                   r.accept});
  }
  return out;
}

} // namespace lfd
