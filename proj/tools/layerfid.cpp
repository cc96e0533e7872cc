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

// layerfid command-line front end. Exit codes: 0 success, 1 usage error,
// 2 data error.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "layerfid/calio.hpp"
#include "layerfid/error.hpp"
#include "layerfid/pipeline.hpp"
#include "layerfid/server.hpp"

namespace {

using namespace lfd;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct Common {
  std::string snapshot;
  std::string synth;
  std::string regime = "balanced";
  std::uint64_t synth_seed = 7;
  std::string config;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
};

struct Thresholds {
  double t1_min = 0.0, t2_min = 0.0;
  double e1q_max = FilterThresholds::kInf, e2q_max = FilterThresholds::kInf, ero_max = FilterThresholds::kInf;
  FilterThresholds get() const { return {t1_min, t2_min, e1q_max, e2q_max, ero_max}; }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--snapshot", c.snapshot, "Calibration snapshot JSON");
  cmd->add_option("--synth", c.synth, "Synthetic topology instead of a snapshot (line:N, ring:N, grid:RxC)");
  cmd->add_option("--regime", c.regime, "Synthetic regime")
      ->check(CLI::IsMember({"t1_dominated", "dephasing_dominated", "balanced"}));
  cmd->add_option("--synth-seed", c.synth_seed, "Synthetic snapshot seed");
  cmd->add_option("--config", c.config, "Noise config JSON");
  cmd->add_option("--seed", c.seed, "Layout tie-break seed");
  cmd->add_option("--out", c.out, "Output file (default stdout)");
}

void add_thresholds(CLI::App* cmd, Thresholds& t) {
  cmd->add_option("--t1-min", t.t1_min, "Minimum T1 (us)");
  cmd->add_option("--t2-min", t.t2_min, "Minimum T2 (us)");
  cmd->add_option("--e1q-max", t.e1q_max, "Single-qubit error bound (strict)");
  cmd->add_option("--e2q-max", t.e2q_max, "Two-qubit error bound (strict)");
  cmd->add_option("--ero-max", t.ero_max, "Mean readout error bound (strict)");
}

CalibrationSnapshot load(const Common& c) {
  if (!c.snapshot.empty() && !c.synth.empty()) throw CLI::ValidationError("--snapshot and --synth are exclusive");
  if (!c.synth.empty()) return synth_snapshot(SynthProfile::from_topology(c.synth, parse_regime(c.regime), c.synth_seed));
  if (c.snapshot.empty()) throw CLI::RequiredError("--snapshot or --synth");
  const DefaultDurations d = c.config.empty() ? DefaultDurations{} : load_config(c.config).durations;
  auto loaded = load_snapshot(c.snapshot, d);
  for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << "\n";
  return std::move(loaded.snapshot);
}

PipelineContext context(const Common& c) {
  PipelineContext ctx;
  if (!c.config.empty()) ctx.noise = load_config(c.config);
  ctx.seed = c.seed;
  return ctx;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(c.out, text);
  }
}

PulseAssignment parse_pulse(const std::string& text) {
  if (text == "per_gate_default") return PulseAssignment::per_gate_default();
  const auto a = text.find('/');
  if (a == std::string::npos) return PulseAssignment::uniform(parse_pulse_shape(text));
  const auto b = text.find('/', a + 1);
  if (b == std::string::npos) throw Error(ErrorCode::InvalidArgument, "pulse must be SHAPE or SX/CZ/MEASURE");
  return {parse_pulse_shape(text.substr(0, a)), parse_pulse_shape(text.substr(a + 1, b - a - 1)),
          parse_pulse_shape(text.substr(b + 1))};
}

std::string real(double v) {
  if (std::isinf(v)) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<ResultRow> repeat(std::vector<ResultRow> rows, int repeats) {
  std::vector<ResultRow> out;
  for (const auto& r : rows) {
    for (int i = 0; i < repeats; ++i) out.push_back(r);
  }
  return out;
}

StatePrep parse_prep(const std::string& text) {
  if (text == "0") return {0.0, 0.0};
  if (text == "1") return {std::numbers::pi, 0.0};
  if (text == "+") return {std::numbers::pi / 2, 0.0};
  if (text == "-") return {std::numbers::pi / 2, std::numbers::pi};
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument(text);
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "prep must be 0, 1, +, - or THETA,PHI: '" + text + "'");
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layer-wise fidelity attribution for teleportation pipelines"};
  app.require_subcommand(1);

  Common common;
  Thresholds th;
  std::string mode = "physical";
  double theta = std::numbers::pi / 2, phi = 0.0, ns = 1.0;
  int repeats = 1;
  std::string pulse_text = "Square";
  std::string layout_text;

  auto* run_cmd = app.add_subcommand("run", "Simulate one pipeline configuration");
  add_common(run_cmd, common);
  add_thresholds(run_cmd, th);
  run_cmd->add_option("--mode", mode)->check(CLI::IsMember({"physical", "encoded"}));
  run_cmd->add_option("--theta", theta);
  run_cmd->add_option("--phi", phi);
  run_cmd->add_option("--ns", ns);
  run_cmd->add_option("--pulse", pulse_text, "SHAPE, SX/CZ/MEASURE or per_gate_default");
  run_cmd->add_option("--layout", layout_text, "Explicit physical qubits, comma separated");
  run_cmd->add_option("--repeats", repeats)->check(CLI::PositiveNumber);

  auto* wf_cmd = app.add_subcommand("waterfall", "Baseline, +L2 and +L3 fidelities");
  add_common(wf_cmd, common);
  add_thresholds(wf_cmd, th);
  wf_cmd->add_option("--mode", mode)->check(CLI::IsMember({"physical", "encoded"}));
  wf_cmd->add_option("--theta", theta);
  wf_cmd->add_option("--phi", phi);
  wf_cmd->add_option("--ns", ns);

  std::optional<double> reference_best;
  auto* cascade_cmd = app.add_subcommand("cascade", "Cumulative filter cascade over the default stages");
  add_common(cascade_cmd, common);
  cascade_cmd->add_option("--theta", theta);
  cascade_cmd->add_option("--phi", phi);
  cascade_cmd->add_option("--ns", ns);
  cascade_cmd->add_option("--reference-best", reference_best, "Fixed reference fidelity for the band");

  std::vector<double> scales{0.5, 1.0, 1.5, 2.0, 2.5};
  std::vector<std::string> prep_texts;
  auto* sweep_cmd = app.add_subcommand("sweep", "Physical vs encoded fidelity across noise scales");
  add_common(sweep_cmd, common);
  add_thresholds(sweep_cmd, th);
  sweep_cmd->add_option("--ns", scales, "Noise scales, ascending")->delimiter(',');
  sweep_cmd->add_option("--prep", prep_texts, "0, 1, +, - or THETA,PHI (repeatable)");
  sweep_cmd->add_option("--theta", theta);
  sweep_cmd->add_option("--phi", phi);
  sweep_cmd->add_option("--pulse", pulse_text);
  sweep_cmd->add_option("--repeats", repeats)->check(CLI::PositiveNumber);

  std::string input;
  auto* convert_cmd = app.add_subcommand("convert-snapshot", "Import a vendor properties JSON or calibration CSV");
  convert_cmd->add_option("input", input, "Vendor file")->required();
  convert_cmd->add_option("--out", common.out, "Snapshot JSON (default stdout)");

  std::string topology = "line:12";
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic snapshot");
  synth_cmd->add_option("--topology", topology, "line:N, ring:N or grid:RxC");
  synth_cmd->add_option("--regime", common.regime)
      ->check(CLI::IsMember({"t1_dominated", "dephasing_dominated", "balanced"}));
  synth_cmd->add_option("--seed", common.synth_seed);
  synth_cmd->add_option("--out", common.out);

  std::string bind = "127.0.0.1:8080";
  std::size_t budget = Api::kDefaultSimulationBudget;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
  add_common(serve_cmd, common);
  serve_cmd->add_option("--bind", bind, "HOST:PORT");
  serve_cmd->add_option("--budget", budget, "Simulations allowed per request");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (run_cmd->parsed()) {
      const auto snapshot = load(common);
      PipelineConfig cfg;
      cfg.mode = parse_mode(mode);
      cfg.prep = {theta, phi};
      cfg.pulse = parse_pulse(pulse_text);
      cfg.ns = NoiseScale(ns);
      if (!layout_text.empty()) {
        LayoutCandidate c;
        std::stringstream ss(layout_text);
        for (std::string tok; std::getline(ss, tok, ',');) c.mapping.push_back(std::stoi(tok));
        cfg.layout = c;
      } else {
        cfg.layout = th.get();
      }
      const auto r = run(cfg, snapshot, context(common));
      emit(common, results_to_csv(repeat({{cfg.mode, theta, phi, r.layout.label(), cfg.pulse, ns, r.fidelity,
                                           r.accept}},
                                         repeats)));
    } else if (wf_cmd->parsed()) {
      const auto snapshot = load(common);
      WaterfallOptions opt;
      opt.mode = parse_mode(mode);
      opt.ns = NoiseScale(ns);
      opt.l2_thresholds = th.get();
      const auto w = waterfall({theta, phi}, snapshot, opt, context(common));
      std::string text = "stage,layout,pulse,fidelity,delta\n";
      const auto square = PulseAssignment::uniform(PulseShape::Square).label();
      text += "baseline," + w.baseline_layout.label() + "," + square + "," + real(w.f_baseline) + ",0\n";
      text += "l2," + w.l2_layout.label() + "," + square + "," + real(w.f_after_l2) + "," + real(w.delta_l2) + "\n";
      text += "l3," + w.l2_layout.label() + "," + w.l3_pulse.label() + "," + real(w.f_after_l3) + "," +
              real(w.delta_l3) + "\n";
      text += "total,,,," + real(w.total) + "\n";
      emit(common, text);
    } else if (cascade_cmd->parsed()) {
      const auto snapshot = load(common);
      const auto rows = filter_cascade(snapshot, default_cascade_stages(), {theta, phi}, reference_best,
                                       NoiseScale(ns), context(common));
      std::string text =
          "stage,t1_min,t2_min,e1q_max,e2q_max,ero_max,node_count,edge_count,path_count,f_worst,f_best,band\n";
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        text += std::to_string(i) + "," + real(r.thresholds.t1_min) + "," + real(r.thresholds.t2_min) + "," +
                real(r.thresholds.e1q_max) + "," + real(r.thresholds.e2q_max) + "," + real(r.thresholds.ero_max) +
                "," + std::to_string(r.node_count) + "," + std::to_string(r.edge_count) + "," +
                std::to_string(r.path_count) + ",";
        text += r.stats ? real(r.stats->f_worst) + "," + real(r.stats->f_best) + "," + real(r.stats->band) : ",,";
        text += "\n";
      }
      emit(common, text);
    } else if (sweep_cmd->parsed()) {
      const auto snapshot = load(common);
      std::vector<StatePrep> preps;
      for (const auto& p : prep_texts) preps.push_back(parse_prep(p));
      if (preps.empty()) preps.push_back({theta, phi});
      SweepOptions opt;
      opt.thresholds = th.get();
      opt.pulse = parse_pulse(pulse_text);
      const auto rows = noise_sweep(snapshot, preps, scales, opt, context(common));
      emit(common, results_to_csv(repeat(to_result_rows(rows, opt.pulse), repeats)));
    } else if (convert_cmd->parsed()) {
      const auto report = convert_vendor_snapshot(read_text_file(input));
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
      for (const auto& u : report.unmapped) std::cerr << "unmapped: " << u << "\n";
      emit(common, snapshot_to_json(report.snapshot));
    } else if (synth_cmd->parsed()) {
      emit(common, snapshot_to_json(
                       synth_snapshot(SynthProfile::from_topology(topology, parse_regime(common.regime),
                                                                  common.synth_seed))));
    } else if (serve_cmd->parsed()) {
      const auto colon = bind.rfind(':');
      if (colon == std::string::npos) throw Error(ErrorCode::InvalidArgument, "--bind must be HOST:PORT");
      const Api api(load(common), context(common), budget);
      HttpService service(api);
      const int port = service.bind(bind.substr(0, colon), std::stoi(bind.substr(colon + 1)));
      std::cerr << "serving " << api.snapshot_id() << " on " << bind.substr(0, colon) << ":" << port << "\n";
      service.run();
    }
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
