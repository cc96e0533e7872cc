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

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "layerfid/calio.hpp"
#include "layerfid/error.hpp"
#include "layerfid/pipeline.hpp"

namespace py = pybind11;
using namespace lfd;

namespace {

LayoutSource layout_source(std::optional<std::vector<int>> layout, std::optional<FilterThresholds> thresholds) {
  if (layout && thresholds) throw Error(ErrorCode::InvalidArgument, "pass either layout or thresholds, not both");
  if (layout) return LayoutCandidate{*layout, 0.0, LayoutKind::Path3};
  return thresholds.value_or(FilterThresholds{});
}

PipelineContext context(std::uint64_t seed) {
  PipelineContext ctx;
  ctx.seed = seed;
  return ctx;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "layerfid native core: teleportation simulation and layer-wise fidelity attribution";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result(
      [&]() { return py::object(py::exception<Error>(m, "LayerfidError", PyExc_ValueError)); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      // args = (code name, message)
      const py::tuple args = py::make_tuple(std::string(error_code_name(e.code())), std::string(e.what()));
      PyErr_SetObject(error_type.get_stored().ptr(), args.ptr());
    }
  });

  py::enum_<TeleportMode>(m, "TeleportMode")
      .value("PHYSICAL", TeleportMode::Physical)
      .value("ENCODED", TeleportMode::Encoded);
  py::enum_<PulseShape>(m, "PulseShape")
      .value("SQUARE", PulseShape::Square)
      .value("GAUSSIAN_SQUARE", PulseShape::GaussianSquare)
      .value("DRAG", PulseShape::DRAG);
  py::enum_<Regime>(m, "Regime")
      .value("T1_DOMINATED", Regime::T1Dominated)
      .value("DEPHASING_DOMINATED", Regime::DephasingDominated)
      .value("BALANCED", Regime::Balanced);

  py::class_<StatePrep>(m, "StatePrep")
      .def(py::init([](double theta, double phi) {
             StatePrep p{theta, phi};
             p.validate();
             return p;
           }),
           py::arg("theta") = 0.0, py::arg("phi") = 0.0)
      .def_readwrite("theta", &StatePrep::theta)
      .def_readwrite("phi", &StatePrep::phi)
      .def("__repr__", [](const StatePrep& p) {
        return "StatePrep(theta=" + std::to_string(p.theta) + ", phi=" + std::to_string(p.phi) + ")";
      });

  py::class_<PulseAssignment>(m, "PulseAssignment")
      .def(py::init<PulseShape, PulseShape, PulseShape>(), py::arg("sx") = PulseShape::Square,
           py::arg("cz") = PulseShape::Square, py::arg("measure") = PulseShape::Square)
      .def_readwrite("sx", &PulseAssignment::sx)
      .def_readwrite("cz", &PulseAssignment::cz)
      .def_readwrite("measure", &PulseAssignment::measure)
      .def_static("uniform", &PulseAssignment::uniform)
      .def_static("per_gate_default", &PulseAssignment::per_gate_default)
      .def_property_readonly("label", &PulseAssignment::label)
      .def(py::self == py::self)
      .def("__repr__", [](const PulseAssignment& p) { return "PulseAssignment(" + p.label() + ")"; });
  m.def("all_pulse_assignments", &all_pulse_assignments);

  py::class_<FilterThresholds>(m, "FilterThresholds")
      .def(py::init([](double t1_min, double t2_min, double e1q_max, double e2q_max, double ero_max) {
             FilterThresholds th{t1_min, t2_min, e1q_max, e2q_max, ero_max};
             th.validate();
             return th;
           }),
           py::arg("t1_min") = 0.0, py::arg("t2_min") = 0.0, py::arg("e1q_max") = FilterThresholds::kInf,
           py::arg("e2q_max") = FilterThresholds::kInf, py::arg("ero_max") = FilterThresholds::kInf)
      .def_readwrite("t1_min", &FilterThresholds::t1_min)
      .def_readwrite("t2_min", &FilterThresholds::t2_min)
      .def_readwrite("e1q_max", &FilterThresholds::e1q_max)
      .def_readwrite("e2q_max", &FilterThresholds::e2q_max)
      .def_readwrite("ero_max", &FilterThresholds::ero_max)
      .def("at_least_as_tight_as", &FilterThresholds::at_least_as_tight_as);
  m.def("default_cascade_stages", &default_cascade_stages);

  py::class_<QubitCal>(m, "QubitCal")
      .def_readonly("t1_us", &QubitCal::t1_us)
      .def_readonly("t2_us", &QubitCal::t2_us)
      .def_readonly("readout_e01", &QubitCal::readout_e01)
      .def_readonly("readout_e10", &QubitCal::readout_e10)
      .def_readonly("err_1q", &QubitCal::err_1q)
      .def_readonly("dur_1q_us", &QubitCal::dur_1q_us)
      .def_readonly("dur_meas_us", &QubitCal::dur_meas_us);
  py::class_<EdgeCal>(m, "EdgeCal")
      .def_readonly("a", &EdgeCal::a)
      .def_readonly("b", &EdgeCal::b)
      .def_readonly("err_2q", &EdgeCal::err_2q)
      .def_readonly("dur_2q_us", &EdgeCal::dur_2q_us);
  py::class_<CalibrationSnapshot>(m, "CalibrationSnapshot")
      .def_readonly("backend_name", &CalibrationSnapshot::backend_name)
      .def_readonly("timestamp", &CalibrationSnapshot::timestamp)
      .def_readonly("qubits", &CalibrationSnapshot::qubits)
      .def_readonly("edges", &CalibrationSnapshot::edges)
      .def_property_readonly("id", &CalibrationSnapshot::id)
      .def("to_json", &snapshot_to_json)
      .def(py::self == py::self);

  m.def("parse_snapshot", [](const std::string& text) { return parse_snapshot(text).snapshot; }, py::arg("text"));
  m.def("load_snapshot", [](const std::filesystem::path& p) { return load_snapshot(p).snapshot; }, py::arg("path"));
  m.def(
      "synth_snapshot",
      [](const std::string& topology, Regime regime, std::uint64_t seed) {
        return synth_snapshot(SynthProfile::from_topology(topology, regime, seed));
      },
      py::arg("topology") = "line:12", py::arg("regime") = Regime::Balanced, py::arg("seed") = 7);

  py::class_<LayoutCandidate>(m, "LayoutCandidate")
      .def_readonly("mapping", &LayoutCandidate::mapping)
      .def_readonly("score", &LayoutCandidate::score)
      .def_property_readonly("label", &LayoutCandidate::label)
      .def("__repr__", [](const LayoutCandidate& c) { return "LayoutCandidate(" + c.label() + ")"; });
  m.def(
      "filter_graph",
      [](const CalibrationSnapshot& s, const FilterThresholds& th) {
        const auto g = filter_graph(s, th);
        return py::make_tuple(g.nodes(), g.edges());
      },
      py::arg("snapshot"), py::arg("thresholds") = FilterThresholds{},
      "Surviving (nodes, edges) under the thresholds.");
  m.def("admissible_layouts", &admissible_layouts, py::arg("mode"), py::arg("thresholds"), py::arg("snapshot"));

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("fidelity", &RunResult::fidelity)
      .def_readonly("accept", &RunResult::accept)
      .def_readonly("layout", &RunResult::layout)
      .def_property_readonly("throughput", &RunResult::throughput);
  m.def(
      "run",
      [](const CalibrationSnapshot& s, TeleportMode mode, const StatePrep& prep, double ns,
         const PulseAssignment& pulse, std::optional<std::vector<int>> layout,
         std::optional<FilterThresholds> thresholds, std::uint64_t seed) {
        PipelineConfig cfg{mode, prep, layout_source(std::move(layout), thresholds), pulse, NoiseScale(ns)};
        py::gil_scoped_release release;
        return run(cfg, s, context(seed));
      },
      py::arg("snapshot"), py::arg("mode") = TeleportMode::Physical, py::arg("prep") = StatePrep{},
      py::arg("ns") = 1.0, py::arg("pulse") = PulseAssignment{}, py::arg("layout") = py::none(),
      py::arg("thresholds") = py::none(), py::arg("seed") = kDefaultSeed);

  py::class_<BandReport>(m, "BandReport")
      .def_readonly("n_configs", &BandReport::n_configs)
      .def_readonly("f_best", &BandReport::f_best)
      .def_readonly("f_worst", &BandReport::f_worst)
      .def_readonly("band", &BandReport::band)
      .def_readonly("reference_best", &BandReport::reference_best);
  m.def("band_of", &band_of, py::arg("fidelities"), py::arg("reference_best") = py::none());

  py::class_<WaterfallReport>(m, "WaterfallReport")
      .def_readonly("f_baseline", &WaterfallReport::f_baseline)
      .def_readonly("f_after_l2", &WaterfallReport::f_after_l2)
      .def_readonly("f_after_l3", &WaterfallReport::f_after_l3)
      .def_readonly("delta_l2", &WaterfallReport::delta_l2)
      .def_readonly("delta_l3", &WaterfallReport::delta_l3)
      .def_readonly("total", &WaterfallReport::total)
      .def_readonly("baseline_layout", &WaterfallReport::baseline_layout)
      .def_readonly("l2_layout", &WaterfallReport::l2_layout)
      .def_readonly("l3_pulse", &WaterfallReport::l3_pulse);
  m.def(
      "waterfall",
      [](const CalibrationSnapshot& s, const StatePrep& prep, TeleportMode mode, double ns, std::uint64_t seed) {
        WaterfallOptions opt;
        opt.mode = mode;
        opt.ns = NoiseScale(ns);
        py::gil_scoped_release release;
        return waterfall(prep, s, opt, context(seed));
      },
      py::arg("snapshot"), py::arg("prep"), py::arg("mode") = TeleportMode::Physical, py::arg("ns") = 1.0,
      py::arg("seed") = kDefaultSeed);

  py::class_<CascadeRow>(m, "CascadeRow")
      .def_readonly("thresholds", &CascadeRow::thresholds)
      .def_readonly("node_count", &CascadeRow::node_count)
      .def_readonly("edge_count", &CascadeRow::edge_count)
      .def_readonly("path_count", &CascadeRow::path_count)
      .def_readonly("stats", &CascadeRow::stats);
  m.def(
      "filter_cascade",
      [](const CalibrationSnapshot& s, std::vector<FilterThresholds> stages, const StatePrep& prep,
         std::optional<double> reference_best, double ns) {
        py::gil_scoped_release release;
        return filter_cascade(s, stages, prep, reference_best, NoiseScale(ns));
      },
      py::arg("snapshot"), py::arg("stages") = default_cascade_stages(), py::arg("prep") = StatePrep{},
      py::arg("reference_best") = py::none(), py::arg("ns") = 1.0);

  py::class_<PulseScore>(m, "PulseScore")
      .def_readonly("pulse", &PulseScore::pulse)
      .def_readonly("fidelity", &PulseScore::fidelity)
      .def_readonly("accept", &PulseScore::accept);
  py::class_<L3Report>(m, "L3Report")
      .def_readonly("assignments", &L3Report::assignments)
      .def_readonly("f_all_square", &L3Report::f_all_square)
      .def_readonly("f_all_gaussian", &L3Report::f_all_gaussian)
      .def_readonly("f_all_drag", &L3Report::f_all_drag)
      .def_readonly("best", &L3Report::best);
  m.def(
      "l3_isolation",
      [](const CalibrationSnapshot& s, const std::vector<int>& layout, const StatePrep& prep, double ns,
         TeleportMode mode) {
        const auto cand = resolve_layout(mode, LayoutCandidate{layout, 0.0, LayoutKind::Path3}, s);
        py::gil_scoped_release release;
        return l3_isolation(s, cand, prep, NoiseScale(ns), mode);
      },
      py::arg("snapshot"), py::arg("layout"), py::arg("prep"), py::arg("ns") = 1.0,
      py::arg("mode") = TeleportMode::Physical);

  py::class_<AblationLadder>(m, "AblationLadder")
      .def_readonly("baseline", &AblationLadder::baseline)
      .def_readonly("l2_fixed", &AblationLadder::l2_fixed)
      .def_readonly("both_fixed", &AblationLadder::both_fixed)
      .def_property_readonly("c_l2", [](const AblationLadder& a) { return a.c_l2.c; })
      .def_property_readonly("c_l3", [](const AblationLadder& a) { return a.c_l3.c; })
      .def_readonly("best_layout", &AblationLadder::best_layout)
      .def_readonly("best_pulse", &AblationLadder::best_pulse);
  m.def(
      "ablation_ladder",
      [](const CalibrationSnapshot& s, const StatePrep& prep, const FilterThresholds& th, double ns) {
        py::gil_scoped_release release;
        return ablation_ladder(s, prep, th, NoiseScale(ns));
      },
      py::arg("snapshot"), py::arg("prep"), py::arg("thresholds") = FilterThresholds{}, py::arg("ns") = 1.0);

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("prep", &SweepRow::prep)
      .def_readonly("ns", &SweepRow::ns)
      .def_readonly("f_phys", &SweepRow::f_phys)
      .def_readonly("f_log", &SweepRow::f_log)
      .def_readonly("accept", &SweepRow::accept)
      .def_readonly("accept_phys", &SweepRow::accept_phys)
      .def_readonly("phys_layout", &SweepRow::phys_layout)
      .def_readonly("log_layout", &SweepRow::log_layout);
  m.def(
      "noise_sweep",
      [](const CalibrationSnapshot& s, const std::vector<StatePrep>& preps, const std::vector<double>& scales,
         const PulseAssignment& pulse, std::uint64_t seed) {
        SweepOptions opt;
        opt.pulse = pulse;
        py::gil_scoped_release release;
        return noise_sweep(s, preps, scales, opt, context(seed));
      },
      py::arg("snapshot"), py::arg("preps"), py::arg("scales") = std::vector<double>{0.5, 1.0, 1.5, 2.0, 2.5},
      py::arg("pulse") = PulseAssignment::per_gate_default(), py::arg("seed") = kDefaultSeed);
  m.def(
      "sweep_csv",
      [](const std::vector<SweepRow>& rows, const PulseAssignment& pulse) {
        return results_to_csv(to_result_rows(rows, pulse));
      },
      py::arg("rows"), py::arg("pulse") = PulseAssignment::per_gate_default(),
      "Results CSV text for sweep rows (two lines per row).");
}
