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
 * @file    noise.hpp
 * @brief   Calibration data and the per-gate noise channels built from it.
 *
 * A gate's error channel is thermal relaxation over the gate duration on each
 * target followed by a stochastic Pauli residual. The residual carries the
 * part of the benchmarked gate error not already explained by decoherence,
 * scaled by a pulse-shape factor. A global noise scale multiplies 1/T1, 1/T2,
 * residual rates and readout errors; each result is clamped to its physical
 * range.
 */

#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "layerfid/qsim.hpp"

namespace lfd {

enum class GateKind { RZ, SX, X, CZ, Measure };

enum class PulseShape { Square = 0, GaussianSquare = 1, DRAG = 2 };

/// Pulse-shape classes: SX and X share one class.
enum class GateClass { SingleQubit = 0, TwoQubit = 1, Measure = 2 };

inline constexpr std::array<PulseShape, 3> kAllShapes{PulseShape::Square, PulseShape::GaussianSquare,
                                                      PulseShape::DRAG};

std::string_view to_string(PulseShape shape);
std::string_view to_string(GateKind kind);
std::string_view to_string(GateClass cls);
/// Accepts "Square", "GaussianSquare", "DRAG" (case-insensitive).
PulseShape parse_pulse_shape(std::string_view text);
std::optional<GateClass> gate_class(GateKind kind);

class NoiseScale {
public:
  constexpr NoiseScale() = default;
  explicit NoiseScale(double value);
  constexpr double value() const noexcept { return value_; }

private:
  double value_ = 1.0;
};

struct QubitCal {
  double t1_us = 0.0;
  double t2_us = 0.0;
  double readout_e01 = 0.0; ///< P(read 1 | true 0)
  double readout_e10 = 0.0; ///< P(read 0 | true 1)
  double err_1q = 0.0;
  double dur_1q_us = 0.0;
  double dur_meas_us = 0.0;

  double mean_readout_error() const { return 0.5 * (readout_e01 + readout_e10); }
  friend bool operator==(const QubitCal&, const QubitCal&) = default;
};

struct EdgeCal {
  int a = 0;
  int b = 0;
  double err_2q = 0.0;
  double dur_2q_us = 0.0;

  bool connects(int p, int q) const { return (a == p && b == q) || (a == q && b == p); }
  friend bool operator==(const EdgeCal&, const EdgeCal&) = default;
};

struct CalibrationSnapshot {
  std::string backend_name;
  std::string timestamp;
  std::map<int, QubitCal> qubits;
  std::vector<EdgeCal> edges;

  /// Throws EdgeNotInSnapshot when the qubit is absent.
  const QubitCal& qubit(int index) const;
  /// Throws EdgeNotInSnapshot when the pair is not a calibrated edge.
  const EdgeCal& edge(int a, int b) const;
  bool has_edge(int a, int b) const;

  /// Checks every invariant; throws InvalidCalibration naming the field.
  void validate() const;
  /// Clamps T2 to 2*T1 where needed and returns one warning per clamp.
  std::vector<std::string> normalize();

  /// "backend@timestamp", echoed by the HTTP API.
  std::string id() const;

  friend bool operator==(const CalibrationSnapshot&, const CalibrationSnapshot&) = default;
};

/// Multiplier on the residual error rate per (gate class, pulse shape).
class ShapeFactorTable {
public:
  /// Defaults ordered so single-qubit gates favour DRAG, CZ favours
  /// GaussianSquare and measurement is shape-insensitive.
  ShapeFactorTable();

  double at(GateClass cls, PulseShape shape) const;
  void set(GateClass cls, PulseShape shape, double factor);

  friend bool operator==(const ShapeFactorTable&, const ShapeFactorTable&) = default;

private:
  std::array<std::array<double, 3>, 3> factor_{};
};

struct DefaultDurations {
  double dur_1q_us = 0.05;
  double dur_2q_us = 0.15;
  double dur_meas_us = 1.2;
  friend bool operator==(const DefaultDurations&, const DefaultDurations&) = default;
};

struct NoiseConfig {
  ShapeFactorTable shape_factors;
  DefaultDurations durations;
  /// Weights over {X, Y, Z}; normalized on use.
  std::array<double, 3> pauli_weights_1q{1.0, 1.0, 1.0};
  /// Weights over the 15 non-identity two-qubit Paulis in IX, IY, ..., ZZ order.
  std::array<double, 15> pauli_weights_2q{1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  friend bool operator==(const NoiseConfig&, const NoiseConfig&) = default;
};

/// Amplitude damping with gamma = 1 - exp(-ns t / T1) followed by the pure
/// dephasing that brings the coherence factor to exp(-ns t / T2).
KrausChannel thermal_relaxation_channel(double t1_us, double t2_us, double duration_us,
                                        NoiseScale ns);

/// 1 - exp(-t (1/T1 + 1/T2) / 2) at calibrated (unscaled) rates.
double coherence_error(double t1_us, double t2_us, double duration_us);

/// clamp(ns * factor * max(0, gate_err - coherence_err), 0, 0.75)
double residual_probability(double gate_err, double coherence_err, double shape_factor,
                            NoiseScale ns);

KrausChannel residual_pauli_channel(double gate_err, double coherence_err, double shape_factor,
                                    NoiseScale ns, int n_targets,
                                    const NoiseConfig& config = NoiseConfig{});

/// Error channel that follows the ideal gate on `physical_qubits`. RZ is
/// virtual and returns the identity. Measure returns the relaxation during
/// readout; assignment error is handled by `confusion`.
KrausChannel gate_channel(const CalibrationSnapshot& snapshot, GateKind kind,
                          std::span<const int> physical_qubits, PulseShape shape, NoiseScale ns,
                          const NoiseConfig& config = NoiseConfig{});

/// [[1 - e01, e10], [e01, 1 - e10]] with each error scaled by ns * factor
/// and clamped to [0, 0.5].
Confusion confusion(const CalibrationSnapshot& snapshot, int qubit, NoiseScale ns,
                    double readout_factor = 1.0);

} // namespace lfd
