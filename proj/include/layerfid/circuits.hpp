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
 * @file    circuits.hpp
 * @brief   Teleportation circuit builders, native-gate rewriting and the
 *          branch-enumerating noisy simulator.
 *
 * Physical mode: Alice 0, Mediator 1, Bob 2.
 * Encoded mode ([[2,1,1]] bit-flip repetition code, |0_L> = |00>,
 * |1_L> = |11>): Alice 0-1, Mediator 2-3, Bob 4-5. The logical Bell
 * measurement is a transversal CX followed by transversal H on Alice, so
 * the X_L outcome is the parity of both Alice bits and the Mediator pair
 * must read 00 or 11 to be accepted.
 */

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "layerfid/graph.hpp"
#include "layerfid/noise.hpp"
#include "layerfid/qsim.hpp"

namespace lfd {

enum class OpKind { RZ, SX, X, H, CX, CZ, Measure, CondX, CondZ };

std::string_view to_string(OpKind kind);

struct GateOp {
  OpKind kind = OpKind::X;
  std::vector<int> qubits;
  double angle = 0.0; ///< RZ only
  /// Measure: the single written bit. CondX/CondZ: fire when the parity of
  /// these recorded bits is odd.
  std::vector<int> cbits;
  std::optional<PulseShape> shape;

  bool is_two_qubit() const { return kind == OpKind::CX || kind == OpKind::CZ; }
  friend bool operator==(const GateOp&, const GateOp&) = default;
};

enum class TeleportMode { Physical, Encoded };

std::string_view to_string(TeleportMode mode);
TeleportMode parse_mode(std::string_view text);

struct Roles {
  std::vector<int> alice;
  std::vector<int> mediator;
  std::vector<int> bob;
  friend bool operator==(const Roles&, const Roles&) = default;
};

/// A set of recorded bits whose joint value must fall in `accepted`
/// (bit i of a value is cbits[i], most significant first).
struct SyndromeCheck {
  std::vector<int> cbits;
  std::vector<unsigned> accepted;
  friend bool operator==(const SyndromeCheck&, const SyndromeCheck&) = default;
};

struct Circuit {
  int n_qubits = 0;
  int n_cbits = 0;
  std::vector<GateOp> ops;
  TeleportMode mode = TeleportMode::Physical;
  Roles roles;
  std::vector<SyndromeCheck> checks;
  /// Index of the first Bell-measurement op in the logical circuit.
  std::size_t bell_measure_index = 0;
  /// Empty for logical circuits. For native circuits, physical[i] is the
  /// device qubit that carries logical qubit i; op indices are physical.
  std::vector<int> physical;

  bool is_native() const { return !physical.empty(); }
  int two_qubit_count() const;
  /// Checks op arities, index ranges and that bits are written before read.
  void validate() const;

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

/// Per-class pulse envelopes.
struct PulseAssignment {
  PulseShape sx = PulseShape::Square;
  PulseShape cz = PulseShape::Square;
  PulseShape measure = PulseShape::Square;

  static PulseAssignment uniform(PulseShape shape) { return {shape, shape, shape}; }
  /// SX = DRAG, CZ = GaussianSquare, Measure = Square.
  static PulseAssignment per_gate_default() {
    return {PulseShape::DRAG, PulseShape::GaussianSquare, PulseShape::Square};
  }
  PulseShape for_class(GateClass cls) const;
  std::string label() const;

  friend bool operator==(const PulseAssignment&, const PulseAssignment&) = default;
  friend auto operator<=>(const PulseAssignment&, const PulseAssignment&) = default;
};

/// The 27 assignments, SX slowest, each in Square, GaussianSquare, DRAG order.
std::vector<PulseAssignment> all_pulse_assignments();

struct SimResult {
  /// Bob's state (decoded and conditioned on acceptance in encoded mode).
  DensityMatrix output_state{1};
  double accept_prob = 1.0;
  /// Encoded mode: weight of Bob's accepted state inside the code space.
  double codespace_prob = 1.0;
  /// Recorded classical string ("c0 c1 ..." as '0'/'1') to probability.
  std::map<std::string, double> branch_log;
};

struct TeleportOutcome {
  double fidelity = 0.0;
  double accept = 0.0;
  double throughput() const { return fidelity * accept; }
};

/// Native RZ/SX ops preparing Rz(phi) Ry(theta)|0> on `qubit` (up to phase).
std::vector<GateOp> state_prep_ops(const StatePrep& prep, int qubit);

Circuit build_physical_teleport(const StatePrep& prep);
Circuit build_encoded_teleport(const StatePrep& prep);
Circuit build_teleport(TeleportMode mode, const StatePrep& prep);

/// Graph on logical qubits with one edge per interacting pair.
CouplingGraph interaction_graph(const Circuit& circuit);

/// Rewrites H and CX into {RZ, SX, CZ} and merges adjacent RZ on each qubit,
/// keeping logical indices.
Circuit rewrite_native(const Circuit& circuit);

/// rewrite_native followed by relabelling logical qubit i as mapping[i].
/// Throws RoutingRequired when a two-qubit op lands off the graph.
Circuit transpile(const Circuit& circuit, std::span<const int> mapping, const CouplingGraph& graph);

/// Walks the circuit, applying each gate's ideal unitary and then its error
/// channel, and enumerating every recorded measurement outcome. Logical
/// (non-native) circuits can only be simulated noiselessly (ns = 0).
SimResult simulate(const Circuit& circuit, const CalibrationSnapshot& snapshot,
                   const PulseAssignment& pulse, NoiseScale ns,
                   const NoiseConfig& config = NoiseConfig{});

/// Noiseless simulation of any circuit; no calibration data needed.
SimResult simulate_ideal(const Circuit& circuit);

TeleportOutcome teleport_fidelity(const SimResult& result, const StatePrep& prep);

/// Line-oriented text form: one op per line,
/// `KIND q... [angle] [c=i,j] [shape=NAME]`, `#` starts a comment.
std::string to_text(const Circuit& circuit);
Circuit parse_circuit(std::string_view text);

} // namespace lfd
