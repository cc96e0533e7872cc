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

#include "layerfid/calio.hpp"

#include <algorithm>
#include <filesystem>
#include <random>

#include "gtest/gtest.h"
#include "layerfid/error.hpp"

namespace lfd {
namespace {

template <class F>
void expect_code(F&& f, ErrorCode code) {
  try {
    f();
    FAIL() << "expected " << error_code_name(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

constexpr const char* kTwoQubit = R"({
  "version": 1, "backend": "toy", "timestamp": "2026-01-01T00:00:00Z",
  "qubits": [
    {"index": 0, "t1_us": 120, "t2_us": 90, "readout_e01": 0.02, "readout_e10": 0.04, "err_1q": 0.001},
    {"index": 1, "t1_us": 80, "t2_us": 60, "readout_e01": 0.01, "readout_e10": 0.03, "err_1q": 0.002,
     "dur_1q_us": 0.04, "dur_meas_us": 1.5, "note": "ignored"}
  ],
  "edges": [{"a": 0, "b": 1, "err_2q": 0.005}]
})";

TEST(Snapshot, ParsesAndFillsDurations) {
  const auto loaded = parse_snapshot(kTwoQubit);
  const auto& s = loaded.snapshot;
  EXPECT_TRUE(loaded.warnings.empty());
  EXPECT_EQ(s.backend_name, "toy");
  ASSERT_EQ(s.qubits.size(), 2u);
  EXPECT_EQ(s.qubit(0).dur_1q_us, DefaultDurations{}.dur_1q_us);
  EXPECT_EQ(s.qubit(1).dur_meas_us, 1.5);
  EXPECT_EQ(s.edge(1, 0).dur_2q_us, DefaultDurations{}.dur_2q_us);
  DefaultDurations d;
  d.dur_2q_us = 0.3;
  EXPECT_EQ(parse_snapshot(kTwoQubit, d).snapshot.edge(0, 1).dur_2q_us, 0.3);
}

TEST(Snapshot, RoundTripIsExact) {
  const auto s = synth_snapshot(SynthProfile::from_topology("grid:3x3", Regime::Balanced, 12));
  const auto back = parse_snapshot(snapshot_to_json(s)).snapshot;
  EXPECT_EQ(back, s);
  const auto path = std::filesystem::temp_directory_path() / "layerfid_snapshot_roundtrip.json";
  save_snapshot(s, path);
  EXPECT_EQ(load_snapshot(path).snapshot, s);
  std::filesystem::remove(path);
}

TEST(Snapshot, T2ClampWarns) {
  std::string text = kTwoQubit;
  text.replace(text.find("\"t2_us\": 90"), 11, "\"t2_us\": 300");
  const auto loaded = parse_snapshot(text);
  EXPECT_EQ(loaded.snapshot.qubit(0).t2_us, 240.0);
  EXPECT_EQ(loaded.warnings.size(), 1u);
}

TEST(Snapshot, Errors) {
  expect_code([] { parse_snapshot("{not json"); }, ErrorCode::MalformedSnapshot);
  expect_code([] { parse_snapshot("[]"); }, ErrorCode::MalformedSnapshot);
  expect_code([] { parse_snapshot(R"({"qubits": [{"index": 0, "t1_us": "x"}]})"); }, ErrorCode::MalformedSnapshot);
  expect_code([] { parse_snapshot(R"({"version": 2, "qubits": []})"); }, ErrorCode::MalformedSnapshot);
  std::string bad = kTwoQubit;
  bad.replace(bad.find("\"readout_e01\": 0.01"), 19, "\"readout_e01\": 0.7");
  try {
    parse_snapshot(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidCalibration);
    EXPECT_NE(std::string(e.what()).find("qubits[1].readout_e01"), std::string::npos);
  }
  std::string dangling = kTwoQubit;
  dangling.replace(dangling.find("\"b\": 1"), 6, "\"b\": 5");
  expect_code([&] { parse_snapshot(dangling); }, ErrorCode::InvalidCalibration);
  expect_code([] { load_snapshot("/nonexistent/layerfid.json"); }, ErrorCode::IoError);
}

TEST(Synth, DeterministicPerSeed) {
  const auto p = SynthProfile::from_topology("ring:8", Regime::T1Dominated, 5);
  EXPECT_EQ(synth_snapshot(p), synth_snapshot(p));
  auto q = p;
  q.seed = 6;
  EXPECT_NE(synth_snapshot(p), synth_snapshot(q));
}

TEST(Synth, TopologyShapes) {
  EXPECT_EQ(synth_snapshot(SynthProfile::from_topology("line:12", Regime::Balanced, 1)).edges.size(), 11u);
  EXPECT_EQ(synth_snapshot(SynthProfile::from_topology("ring:8", Regime::Balanced, 1)).edges.size(), 8u);
  const auto g = synth_snapshot(SynthProfile::from_topology("grid:3x4", Regime::Balanced, 1));
  EXPECT_EQ(g.qubits.size(), 12u);
  EXPECT_EQ(g.edges.size(), 3u * 3u + 4u * 2u);
  EXPECT_TRUE(g.has_edge(0, 4));
  EXPECT_FALSE(g.has_edge(3, 4));
  for (const char* bad : {"line", "line:0", "grid:3", "torus:4", "line:x"}) {
    expect_code([&] { SynthProfile::from_topology(bad, Regime::Balanced, 1); }, ErrorCode::InvalidArgument);
  }
}

TEST(Synth, RegimeContracts) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto deph = synth_snapshot(SynthProfile::from_topology("line:6", Regime::DephasingDominated, seed));
    for (const auto& [i, q] : deph.qubits) EXPECT_LT(q.t2_us, q.t1_us);
    const auto t1 = synth_snapshot(SynthProfile::from_topology("line:6", Regime::T1Dominated, seed));
    for (const auto& [i, q] : t1.qubits) {
      EXPECT_GT(q.t2_us, 1.8 * q.t1_us);
      EXPECT_LE(q.t2_us, 2.0 * q.t1_us);
      EXPECT_GT(q.readout_e10, q.readout_e01);
    }
  }
  EXPECT_EQ(parse_regime("t1_dominated"), Regime::T1Dominated);
  expect_code([] { parse_regime("nope"); }, ErrorCode::InvalidArgument);
}

TEST(Synth, RandomProfilesAreValid) {
  std::mt19937_64 rng(21);
  const std::vector<std::string> topos{"line:", "ring:", "grid:"};
  for (int trial = 0; trial < 100; ++trial) {
    const auto& t = topos[rng() % 3];
    const int n = 2 + static_cast<int>(rng() % 10);
    const std::string topo = t == "grid:" ? "grid:" + std::to_string(1 + n % 4) + "x" + std::to_string(n) : t + std::to_string(n);
    auto p = SynthProfile::from_topology(topo, static_cast<Regime>(rng() % 3), rng());
    p.err_2q = 0.02 * static_cast<double>(rng() % 100) / 100.0;
    const auto s = synth_snapshot(p);
    EXPECT_NO_THROW(s.validate()) << topo;
    auto copy = s;
    EXPECT_TRUE(copy.normalize().empty());
  }
}

TEST(Config, RoundTripAndOverrides) {
  NoiseConfig cfg;
  cfg.shape_factors.set(GateClass::TwoQubit, PulseShape::DRAG, 1.7);
  cfg.durations.dur_meas_us = 2.0;
  cfg.pauli_weights_1q = {1.0, 0.0, 3.0};
  EXPECT_EQ(parse_config(config_to_json(cfg)), cfg);
  const auto partial = parse_config(R"({"shape_factors": {"MEASURE": {"GaussianSquare": 0.5}}})");
  EXPECT_EQ(partial.shape_factors.at(GateClass::Measure, PulseShape::GaussianSquare), 0.5);
  EXPECT_EQ(partial.durations, DefaultDurations{});
  expect_code([] { parse_config(R"({"shape_factors": {"RZ": {"Square": 1}}})"); }, ErrorCode::InvalidArgument);
  expect_code([] { parse_config(R"({"durations": {"dur_1q_us": -1}})"); }, ErrorCode::InvalidArgument);
  expect_code([] { parse_config(R"({"pauli_weights_1q": [1, 2]})"); }, ErrorCode::InvalidArgument);
}

TEST(ResultsCsv, HeaderAndFormat) {
  ResultRow r{TeleportMode::Encoded, 0.5, 1.25, "0-3-1-4-2-5", PulseAssignment::per_gate_default(), 1.0, 0.9, 0.8};
  const auto text = results_to_csv({r});
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "mode,theta,phi,layout,pulse_sx,pulse_cz,pulse_meas,ns,fidelity,accept");
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_NE(text.find("encoded,0.5,1.25,0-3-1-4-2-5,DRAG,GaussianSquare,Square,1,"), std::string::npos);
}

TEST(ResultsCsv, ThousandRowRoundTrip) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto pulses = all_pulse_assignments();
  std::vector<ResultRow> rows;
  for (int i = 0; i < 1000; ++i) {
    rows.push_back({i % 2 ? TeleportMode::Encoded : TeleportMode::Physical, 3.14159 * u(rng), 6.28 * u(rng),
                    std::to_string(i % 7) + "-" + std::to_string(i % 7 + 1) + "-" + std::to_string(i % 7 + 2),
                    pulses[rng() % pulses.size()], 2.5 * u(rng), u(rng), u(rng)});
  }
  EXPECT_EQ(results_from_csv(results_to_csv(rows)), rows);
  const auto path = std::filesystem::temp_directory_path() / "layerfid_results.csv";
  write_results(rows, path);
  EXPECT_EQ(read_results(path), rows);
  std::filesystem::remove(path);
}

TEST(ResultsCsv, Rejects) {
  expect_code([] { results_from_csv("a,b\n"); }, ErrorCode::InvalidArgument);
  expect_code([] { results_from_csv(""); }, ErrorCode::InvalidArgument);
  const std::string header = "mode,theta,phi,layout,pulse_sx,pulse_cz,pulse_meas,ns,fidelity,accept\n";
  expect_code([&] { results_from_csv(header + "physical,1,2,0-1-2,Square,Square,Square,1,0.9\n"); },
              ErrorCode::InvalidArgument);
  expect_code([&] { results_from_csv(header + "physical,1,x,0-1-2,Square,Square,Square,1,0.9,1\n"); },
              ErrorCode::InvalidArgument);
  EXPECT_TRUE(results_from_csv(header).empty());
}

TEST(Convert, PropertiesJson) {
  const std::string doc = R"({
    "backend_name": "vendor_dev", "last_update_date": "2026-03-01", "general": [],
    "qubits": [
      [{"name": "T1", "unit": "us", "value": 150}, {"name": "T2", "unit": "us", "value": 100},
       {"name": "prob_meas1_prep0", "value": 0.01}, {"name": "prob_meas0_prep1", "value": 0.02},
       {"name": "readout_length", "unit": "ns", "value": 1560}, {"name": "frequency", "unit": "GHz", "value": 4.9}],
      [{"name": "T1", "unit": "s", "value": 9e-5}, {"name": "T2", "unit": "s", "value": 2e-4},
       {"name": "readout_error", "value": 0.03}],
      [{"name": "T1", "unit": "us", "value": 100}]
    ],
    "gates": [
      {"gate": "sx", "qubits": [0], "parameters": [{"name": "gate_error", "value": 2e-4},
                                                   {"name": "gate_length", "unit": "ns", "value": 32}]},
      {"gate": "x", "qubits": [1], "parameters": [{"name": "gate_error", "value": 3e-4}]},
      {"gate": "cz", "qubits": [1, 0], "parameters": [{"name": "gate_error", "value": 4e-3},
                                                      {"name": "gate_length", "unit": "ns", "value": 68}]},
      {"gate": "cz", "qubits": [0, 1], "parameters": [{"name": "gate_error", "value": 9e-3}]},
      {"gate": "rzz", "qubits": [0, 1], "parameters": []}
    ]})";
  const auto r = convert_vendor_snapshot(doc);
  const auto& s = r.snapshot;
  EXPECT_EQ(s.backend_name, "vendor_dev");
  ASSERT_EQ(s.qubits.size(), 2u);
  EXPECT_EQ(s.qubit(0).t1_us, 150.0);
  EXPECT_NEAR(s.qubit(0).dur_meas_us, 1.56, 1e-12);
  EXPECT_NEAR(s.qubit(0).dur_1q_us, 0.032, 1e-12);
  EXPECT_EQ(s.qubit(0).readout_e10, 0.02);
  EXPECT_NEAR(s.qubit(1).t1_us, 90.0, 1e-9);
  EXPECT_NEAR(s.qubit(1).t2_us, 180.0, 1e-9);
  EXPECT_EQ(s.qubit(1).readout_e01, 0.03);
  EXPECT_EQ(s.qubit(1).err_1q, 3e-4);
  EXPECT_EQ(s.edge(0, 1).err_2q, 4e-3);
  EXPECT_NEAR(s.edge(0, 1).dur_2q_us, 0.068, 1e-12);
  const auto has = [&](const std::string& name) {
    return std::find(r.unmapped.begin(), r.unmapped.end(), name) != r.unmapped.end();
  };
  EXPECT_TRUE(has("general"));
  EXPECT_TRUE(has("qubits[].frequency"));
  EXPECT_TRUE(has("gates.rzz"));
  EXPECT_FALSE(r.warnings.empty());
}

TEST(Convert, CalibrationCsv) {
  const std::string csv =
      "Qubit,T1 (us),T2 (us),Frequency (GHz),Readout assignment error ,Prob meas0 prep1 ,Prob meas1 prep0 ,"
      "Readout length (ns),\xE2\x88\x9Ax (sx) error ,Single-qubit gate length (ns),CZ error ,Gate length (ns)\n"
      "0,120.5,80.25,4.8,0.02,0.03,0.01,1560,0.0003,32,\"1:0.004\",\"1:68\"\n"
      "1,90,70,4.9,0.015,0.02,0.01,1560,0.0002,32,\"0:0.004;2:0.006\",\"0:68;2:68\"\n"
      "2,110,60,5.0,0.5,0.6,0.4,1560,0.0002,32,\"1:0.006\",\"1:68\"\n";
  const auto r = convert_vendor_snapshot(csv);
  const auto& s = r.snapshot;
  ASSERT_EQ(s.qubits.size(), 3u);
  EXPECT_EQ(s.qubit(0).t2_us, 80.25);
  EXPECT_EQ(s.qubit(0).readout_e10, 0.03);
  EXPECT_EQ(s.qubit(0).err_1q, 0.0003);
  EXPECT_NEAR(s.qubit(0).dur_meas_us, 1.56, 1e-12);
  EXPECT_EQ(s.edges.size(), 2u);
  EXPECT_EQ(s.edge(2, 1).err_2q, 0.006);
  EXPECT_NEAR(s.edge(1, 2).dur_2q_us, 0.068, 1e-12);
  EXPECT_EQ(s.qubit(2).readout_e10, 0.5);
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_EQ(r.unmapped, std::vector<std::string>{"column:Frequency (GHz)"});
  expect_code([] { convert_vendor_snapshot("a,b\n1,2\n"); }, ErrorCode::MalformedSnapshot);
}

TEST(Convert, NativeSchemaPassesThrough) {
  const auto r = convert_vendor_snapshot(kTwoQubit);
  EXPECT_EQ(r.snapshot, parse_snapshot(kTwoQubit).snapshot);
  EXPECT_TRUE(r.unmapped.empty());
}

} // namespace
} // namespace lfd
