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

#include "layerfid/circuits.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "layerfid/error.hpp"

namespace lfd {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<StatePrep> prep_grid() {
  std::vector<StatePrep> out;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) out.push_back({kPi * i / 4.0, 2.0 * kPi * j / 5.0});
  return out;
}

CalibrationSnapshot grid_snapshot() {
  // 2x3 grid: 0-1-2 / 3-4-5 with verticals.
  CalibrationSnapshot s;
  s.backend_name = "grid";
  s.timestamp = "t";
  for (int q = 0; q < 6; ++q) s.qubits[q] = {100.0 + 5 * q, 80.0, 0.02, 0.03, 0.001, 0.05, 1.2};
  for (auto [a, b] : {std::pair{0, 1}, {1, 2}, {3, 4}, {4, 5}, {0, 3}, {1, 4}, {2, 5}}) {
    s.edges.push_back({a, b, 0.01, 0.15});
  }
  return s;
}

Circuit with_injected(Circuit c, std::size_t at, OpKind kind, int qubit) {
  GateOp op;
  op.kind = kind;
  op.qubits = {qubit};
  if (kind == OpKind::RZ) op.angle = kPi; // a Z flip up to phase
  c.ops.insert(c.ops.begin() + static_cast<std::ptrdiff_t>(at), op);
  return c;
}

std::size_t first_measure(const Circuit& c) {
  for (std::size_t i = 0; i < c.ops.size(); ++i)
    if (c.ops[i].kind == OpKind::Measure) return i;
  return c.ops.size();
}

TEST(StatePrep, NativeOpsMatchInitState) {
  for (const auto& prep : prep_grid()) {
    Circuit c;
    c.n_qubits = 1;
    c.ops = state_prep_ops(prep, 0);
    c.roles.bob = {0};
    const auto r = simulate_ideal(c);
    EXPECT_NEAR(fidelity(r.output_state, prep), 1.0, 1e-12);
  }
}

TEST(Physical, StructureAndNoiselessIdentity) {
  const auto c = build_physical_teleport({0.3, 1.1});
  EXPECT_EQ(c.two_qubit_count(), 2);
  EXPECT_EQ(c.n_qubits, 3);
  for (const auto& prep : prep_grid()) {
    const auto out = teleport_fidelity(simulate_ideal(build_physical_teleport(prep)), prep);
    EXPECT_NEAR(out.fidelity, 1.0, 1e-9);
    EXPECT_EQ(out.accept, 1.0);
  }
}

TEST(Physical, BellOutcomesUniform) {
  const auto r = simulate_ideal(build_physical_teleport({0.0, 0.0}));
  ASSERT_EQ(r.branch_log.size(), 4u);
  for (const auto& [key, p] : r.branch_log) EXPECT_NEAR(p, 0.25, 1e-12) << key;
}

TEST(Encoded, StructureAndNoiselessIdentity) {
  const auto c = build_encoded_teleport({0.3, 1.1});
  EXPECT_EQ(c.n_qubits, 6);
  EXPECT_EQ(c.two_qubit_count(), 6);
  ASSERT_EQ(c.checks.size(), 1u);
  EXPECT_EQ(c.checks[0].accepted, (std::vector<unsigned>{0b00, 0b11}));
  for (const auto& prep : prep_grid()) {
    const auto r = simulate_ideal(build_encoded_teleport(prep));
    const auto out = teleport_fidelity(r, prep);
    EXPECT_NEAR(out.fidelity, 1.0, 1e-9);
    EXPECT_NEAR(out.accept, 1.0, 1e-9);
    double total = 0.0;
    for (const auto& [key, p] : r.branch_log) total += p;
    EXPECT_NEAR(total, 1.0, 1e-10);
  }
}

TEST(Encoded, DetectsBitFlipsIgnoresPhaseFlips) {
  const StatePrep prep{1.1, 0.4};
  const auto base = build_encoded_teleport(prep);
  const std::size_t before_measure = first_measure(base);
  for (int q = 0; q < 4; ++q) {
    const auto x = simulate_ideal(with_injected(base, base.bell_measure_index, OpKind::X, q));
    EXPECT_NEAR(x.accept_prob, 0.0, 1e-9) << "X on q" << q;
    const auto z = simulate_ideal(with_injected(base, base.bell_measure_index, OpKind::RZ, q));
    EXPECT_NEAR(z.accept_prob, 1.0, 1e-9);
  }
  for (int q : {2, 3}) {
    EXPECT_NEAR(simulate_ideal(with_injected(base, before_measure, OpKind::X, q)).accept_prob, 0.0, 1e-9);
    EXPECT_NEAR(simulate_ideal(with_injected(base, before_measure, OpKind::RZ, q)).accept_prob, 1.0, 1e-9);
  }
}

TEST(Encoded, PhaseFlipOnAliceCorruptsAcceptedState) {
  const StatePrep prep{kPi / 2, 0.0};
  const auto base = build_encoded_teleport(prep);
  const auto c = with_injected(base, base.bell_measure_index, OpKind::RZ, 0);
  const auto out = teleport_fidelity(simulate_ideal(c), prep);
  EXPECT_NEAR(out.accept, 1.0, 1e-9);
  EXPECT_NEAR(out.fidelity, 0.0, 1e-9);
}

TEST(Rewrite, HadamardExpansion) {
  Circuit c;
  c.n_qubits = 1;
  GateOp h;
  h.kind = OpKind::H;
  h.qubits = {0};
  c.ops = {h};
  const auto native = rewrite_native(c);
  ASSERT_EQ(native.ops.size(), 3u);
  EXPECT_EQ(native.ops[0].kind, OpKind::RZ);
  EXPECT_EQ(native.ops[1].kind, OpKind::SX);
  EXPECT_EQ(native.ops[2].kind, OpKind::RZ);
  const Matrix m = gates::rz(native.ops[2].angle) * gates::sx() * gates::rz(native.ops[0].angle);
  // Equal up to global phase: |tr(H^dag M)| = 2.
  EXPECT_NEAR(std::abs((gates::h().adjoint() * m).trace()), 2.0, 1e-12);
}

TEST(Rewrite, MergesAdjacentRz) {
  Circuit c;
  c.n_qubits = 1;
  GateOp a;
  a.kind = OpKind::RZ;
  a.qubits = {0};
  a.angle = 0.5;
  GateOp b = a;
  b.angle = -0.5;
  GateOp x;
  x.kind = OpKind::X;
  x.qubits = {0};
  c.ops = {a, a, x, a, b};
  const auto native = rewrite_native(c);
  ASSERT_EQ(native.ops.size(), 2u);
  EXPECT_NEAR(native.ops[0].angle, 1.0, 1e-15);
  EXPECT_EQ(native.ops[1].kind, OpKind::X);
}

TEST(Transpile, PhysicalOnLine) {
  const auto logical = build_physical_teleport({0.7, 0.2});
  const auto g = CouplingGraph::from_snapshot(grid_snapshot());
  const std::vector<int> mapping{0, 1, 2};
  const auto native = transpile(logical, mapping, g);
  EXPECT_EQ(native.two_qubit_count(), 2);
  for (const auto& op : native.ops) {
    EXPECT_NE(op.kind, OpKind::H);
    EXPECT_NE(op.kind, OpKind::CX);
  }
  EXPECT_EQ(native.physical, mapping);
}

TEST(Transpile, RoutingRequired) {
  const auto logical = build_physical_teleport({0.7, 0.2});
  const auto g = CouplingGraph::from_snapshot(grid_snapshot());
  const std::vector<int> mapping{0, 2, 5};
  try {
    transpile(logical, mapping, g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RoutingRequired);
  }
}

TEST(Transpile, EquivalentToLogicalAtZeroNoise) {
  const auto snap = grid_snapshot();
  const auto g = CouplingGraph::from_snapshot(snap);
  for (const auto& prep : prep_grid()) {
    const auto phys = build_physical_teleport(prep);
    const std::vector<int> m3{3, 4, 1};
    const auto r3 = simulate(transpile(phys, m3, g), snap, {}, NoiseScale(0.0));
    EXPECT_NEAR(teleport_fidelity(r3, prep).fidelity, teleport_fidelity(simulate_ideal(phys), prep).fidelity, 1e-9);

    const auto enc = build_encoded_teleport(prep);
    const std::vector<int> m6{0, 3, 1, 4, 2, 5};
    const auto r6 = simulate(transpile(enc, m6, g), snap, {}, NoiseScale(0.0));
    EXPECT_NEAR(teleport_fidelity(r6, prep).fidelity, teleport_fidelity(simulate_ideal(enc), prep).fidelity, 1e-9);
    EXPECT_NEAR(r6.accept_prob, 1.0, 1e-9);
  }
}

TEST(Simulate, NoisyRunIsNormalizedAndDeterministic) {
  const auto snap = grid_snapshot();
  const auto g = CouplingGraph::from_snapshot(snap);
  const StatePrep prep{kPi / 2, 0.0};
  const std::vector<int> m6{0, 3, 1, 4, 2, 5};
  const auto native = transpile(build_encoded_teleport(prep), m6, g);
  const auto a = simulate(native, snap, PulseAssignment::per_gate_default(), NoiseScale(1.0));
  const auto b = simulate(native, snap, PulseAssignment::per_gate_default(), NoiseScale(1.0));
  EXPECT_EQ(a.output_state.data(), b.output_state.data());
  EXPECT_EQ(a.accept_prob, b.accept_prob);
  double total = 0.0;
  for (const auto& [key, p] : a.branch_log) total += p;
  EXPECT_NEAR(total, 1.0, 1e-10);
  EXPECT_LT(a.accept_prob, 1.0);
  EXPECT_NEAR(a.output_state.trace(), 1.0, 1e-10);
}

TEST(Simulate, FidelityNonIncreasingInNoiseScale) {
  const auto snap = grid_snapshot();
  const auto g = CouplingGraph::from_snapshot(snap);
  for (const auto& prep : {StatePrep{kPi, 0.0}, StatePrep{kPi / 2, 0.0}, StatePrep{1.0, 2.0}}) {
    const std::vector<int> m3{0, 1, 2};
    const auto native = transpile(build_physical_teleport(prep), m3, g);
    double last = 2.0;
    for (double ns : {0.0, 0.5, 1.0, 1.5, 2.0, 2.5}) {
      const double f = teleport_fidelity(simulate(native, snap, {}, NoiseScale(ns)), prep).fidelity;
      EXPECT_LE(f, last + 1e-12) << "ns=" << ns;
      last = f;
    }
  }
}

TEST(Simulate, LogicalCircuitNeedsTranspileWhenNoisy) {
  const auto snap = grid_snapshot();
  EXPECT_THROW(simulate(build_physical_teleport({}), snap, {}, NoiseScale(1.0)), Error);
}

TEST(Pulse, AllAssignments) {
  const auto all = all_pulse_assignments();
  ASSERT_EQ(all.size(), 27u);
  EXPECT_EQ(all.front(), PulseAssignment::uniform(PulseShape::Square));
  EXPECT_EQ(all.back(), PulseAssignment::uniform(PulseShape::DRAG));
  EXPECT_EQ(PulseAssignment::per_gate_default().label(), "DRAG/GaussianSquare/Square");
}

TEST(Text, RoundTrip) {
  const auto snap = grid_snapshot();
  const auto g = CouplingGraph::from_snapshot(snap);
  const auto logical = build_encoded_teleport({0.4, 5.9});
  EXPECT_EQ(parse_circuit(to_text(logical)), logical);
  const std::vector<int> m6{0, 3, 1, 4, 2, 5};
  auto native = transpile(logical, m6, g);
  native.ops[1].shape = PulseShape::DRAG;
  EXPECT_EQ(parse_circuit(to_text(native)), native);
}

TEST(Text, RejectsGarbage) {
  EXPECT_THROW(parse_circuit(".qubits 1\nFOO 0\n"), Error);
  EXPECT_THROW(parse_circuit(".qubits 1\n.cbits 1\nCOND_X 0 c=0\n"), Error);
  EXPECT_THROW(parse_circuit(".qubits 2\nCX 0 0\n"), Error);
}

} // namespace
} // namespace lfd
