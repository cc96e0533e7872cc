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

#include "layerfid/noise.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "layerfid/error.hpp"

namespace lfd {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 0.5; }

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::InvalidCalibration, field + ": " + why);
}

std::string qubit_field(int index, const char* name) {
  return "qubits[" + std::to_string(index) + "]." + name;
}

std::array<Matrix, 4> paulis() { return {gates::identity(1), gates::x(), gates::y(), gates::z()}; }

Matrix kron2(const Matrix& a, const Matrix& b) {
  Matrix k(4, 4);
  for (Eigen::Index i = 0; i < 2; ++i)
    for (Eigen::Index j = 0; j < 2; ++j) k.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
  return k;
}

template <std::size_t N>
std::array<double, N> normalized(const std::array<double, N>& w) {
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0.0) || std::any_of(w.begin(), w.end(), [](double v) { return v < 0.0; })) {
    throw Error(ErrorCode::InvalidArgument, "Pauli weights must be nonnegative with positive sum");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = w[i] / total;
  return out;
}

KrausChannel compact(KrausChannel channel) {
  if (channel.operators().size() <= 1) return channel;
  return channel.compressed();
}

} // namespace

std::string_view to_string(PulseShape shape) {
  switch (shape) {
  case PulseShape::Square: return "Square";
  case PulseShape::GaussianSquare: return "GaussianSquare";
  case PulseShape::DRAG: return "DRAG";
  }
  return "?";
}

std::string_view to_string(GateKind kind) {
  switch (kind) {
  case GateKind::RZ: return "RZ";
  case GateKind::SX: return "SX";
  case GateKind::X: return "X";
  case GateKind::CZ: return "CZ";
  case GateKind::Measure: return "MEASURE";
  }
  return "?";
}

std::string_view to_string(GateClass cls) {
  switch (cls) {
  case GateClass::SingleQubit: return "SX";
  case GateClass::TwoQubit: return "CZ";
  case GateClass::Measure: return "MEASURE";
  }
  return "?";
}

PulseShape parse_pulse_shape(std::string_view text) {
  std::string lower;
  for (char c : text) {
    if (c == '_' || c == '-' || c == ' ') continue;
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (lower == "square") return PulseShape::Square;
  if (lower == "gaussiansquare" || lower == "gaussian") return PulseShape::GaussianSquare;
  if (lower == "drag") return PulseShape::DRAG;
  throw Error(ErrorCode::InvalidArgument, "unknown pulse shape '" + std::string(text) + "'");
}

std::optional<GateClass> gate_class(GateKind kind) {
  switch (kind) {
  case GateKind::SX:
  case GateKind::X: return GateClass::SingleQubit;
  case GateKind::CZ: return GateClass::TwoQubit;
  case GateKind::Measure: return GateClass::Measure;
  case GateKind::RZ: return std::nullopt;
  }
  return std::nullopt;
}

NoiseScale::NoiseScale(double value) : value_(value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw Error(ErrorCode::InvalidArgument, "noise scale must be a finite nonnegative number");
  }
}

const QubitCal& CalibrationSnapshot::qubit(int index) const {
  const auto it = qubits.find(index);
  if (it == qubits.end()) {
    throw Error(ErrorCode::EdgeNotInSnapshot, "qubit " + std::to_string(index) + " not in snapshot");
  }
  return it->second;
}

const EdgeCal& CalibrationSnapshot::edge(int a, int b) const {
  for (const auto& e : edges) {
    if (e.connects(a, b)) return e;
  }
  throw Error(ErrorCode::EdgeNotInSnapshot,
              "edge (" + std::to_string(a) + "," + std::to_string(b) + ") not in snapshot");
}

bool CalibrationSnapshot::has_edge(int a, int b) const {
  return std::any_of(edges.begin(), edges.end(), [&](const EdgeCal& e) { return e.connects(a, b); });
}

void CalibrationSnapshot::validate() const {
  for (const auto& [index, q] : qubits) {
    if (index < 0) invalid(qubit_field(index, "index"), "must be nonnegative");
    if (!(q.t1_us > 0.0) || !std::isfinite(q.t1_us)) invalid(qubit_field(index, "t1_us"), "must be positive");
    if (!(q.t2_us > 0.0) || !std::isfinite(q.t2_us)) invalid(qubit_field(index, "t2_us"), "must be positive");
    if (q.t2_us > 2.0 * q.t1_us * (1.0 + 1e-12)) invalid(qubit_field(index, "t2_us"), "exceeds 2*t1");
    if (!is_probability(q.readout_e01)) invalid(qubit_field(index, "readout_e01"), "must lie in [0, 0.5]");
    if (!is_probability(q.readout_e10)) invalid(qubit_field(index, "readout_e10"), "must lie in [0, 0.5]");
    if (!is_probability(q.err_1q)) invalid(qubit_field(index, "err_1q"), "must lie in [0, 0.5]");
    if (!(q.dur_1q_us > 0.0)) invalid(qubit_field(index, "dur_1q_us"), "must be positive");
    if (!(q.dur_meas_us > 0.0)) invalid(qubit_field(index, "dur_meas_us"), "must be positive");
  }
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    const std::string field = "edges[" + std::to_string(i) + "]";
    if (e.a == e.b) invalid(field, "endpoints must be distinct");
    if (!qubits.contains(e.a) || !qubits.contains(e.b)) invalid(field, "endpoint not in qubits");
    if (!is_probability(e.err_2q)) invalid(field + ".err_2q", "must lie in [0, 0.5]");
    if (!(e.dur_2q_us > 0.0)) invalid(field + ".dur_2q_us", "must be positive");
    if (!seen.insert(std::minmax(e.a, e.b)).second) invalid(field, "duplicate edge");
  }
}

std::vector<std::string> CalibrationSnapshot::normalize() {
  std::vector<std::string> warnings;
  for (auto& [index, q] : qubits) {
    if (q.t1_us > 0.0 && q.t2_us > 2.0 * q.t1_us) {
      std::ostringstream msg;
      msg << "qubit " << index << ": t2_us " << q.t2_us << " exceeds 2*t1_us; clamped to "
          << 2.0 * q.t1_us;
      warnings.push_back(msg.str());
      q.t2_us = 2.0 * q.t1_us;
    }
  }
  return warnings;
}

std::string CalibrationSnapshot::id() const { return backend_name + "@" + timestamp; }

ShapeFactorTable::ShapeFactorTable() {
  factor_[static_cast<int>(GateClass::SingleQubit)] = {1.3, 1.1, 0.7};
  factor_[static_cast<int>(GateClass::TwoQubit)] = {1.25, 0.8, 1.0};
  factor_[static_cast<int>(GateClass::Measure)] = {1.0, 1.0, 1.0};
}

double ShapeFactorTable::at(GateClass cls, PulseShape shape) const {
  return factor_[static_cast<std::size_t>(cls)][static_cast<std::size_t>(shape)];
}

void ShapeFactorTable::set(GateClass cls, PulseShape shape, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw Error(ErrorCode::InvalidArgument, "shape factors must be positive");
  }
  factor_[static_cast<std::size_t>(cls)][static_cast<std::size_t>(shape)] = factor;
}

KrausChannel thermal_relaxation_channel(double t1_us, double t2_us, double duration_us,
                                        NoiseScale ns) {
  if (!(t1_us > 0.0) || !(t2_us > 0.0) || !(duration_us >= 0.0)) {
    throw Error(ErrorCode::InvalidCalibration, "thermal relaxation needs positive T1, T2, duration");
  }
  if (t2_us > 2.0 * t1_us * (1.0 + 1e-12)) {
    throw Error(ErrorCode::InvalidCalibration, "T2 exceeds 2*T1");
  }
  const double t = ns.value() * duration_us;
  const double gamma = -std::expm1(-t / t1_us);
  // Residual dephasing rate 1/T2 - 1/(2 T1) >= 0 once T2 <= 2 T1.
  const double phi_rate = std::max(0.0, 1.0 / t2_us - 0.5 / t1_us);
  const double p_flip = -0.5 * std::expm1(-t * phi_rate);

  Matrix k0 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  std::vector<Matrix> ops;
  ops.push_back(std::sqrt(1.0 - p_flip) * k0);
  if (p_flip > 0.0) ops.push_back(std::sqrt(p_flip) * (gates::z() * k0));
  if (gamma > 0.0) {
    Matrix k1 = Matrix::Zero(2, 2);
    k1(0, 1) = std::sqrt(gamma);
    ops.push_back(std::move(k1));
  }
  return KrausChannel(std::move(ops));
}

double coherence_error(double t1_us, double t2_us, double duration_us) {
  return -std::expm1(-duration_us * (1.0 / t1_us + 1.0 / t2_us) / 2.0);
}

double residual_probability(double gate_err, double coherence_err, double shape_factor,
                            NoiseScale ns) {
  if (!is_probability(gate_err) || !is_probability(coherence_err)) {
    throw Error(ErrorCode::InvalidArgument, "error rates must lie in [0, 0.5]");
  }
  if (!(shape_factor > 0.0)) throw Error(ErrorCode::InvalidArgument, "shape factor must be positive");
  const double p = ns.value() * shape_factor * std::max(0.0, gate_err - coherence_err);
  return std::clamp(p, 0.0, 0.75);
}

KrausChannel residual_pauli_channel(double gate_err, double coherence_err, double shape_factor,
                                    NoiseScale ns, int n_targets, const NoiseConfig& config) {
  if (n_targets != 1 && n_targets != 2) {
    throw Error(ErrorCode::InvalidDimension, "residual channel acts on 1 or 2 qubits");
  }
  const double p = residual_probability(gate_err, coherence_err, shape_factor, ns);
  if (p == 0.0) return KrausChannel::identity(n_targets);

  const auto pauli = paulis();
  std::vector<Matrix> ops;
  ops.push_back(std::sqrt(1.0 - p) * gates::identity(n_targets));
  if (n_targets == 1) {
    const auto w = normalized(config.pauli_weights_1q);
    for (std::size_t i = 0; i < 3; ++i) {
      if (w[i] > 0.0) ops.push_back(std::sqrt(p * w[i]) * pauli[i + 1]);
    }
  } else {
    const auto w = normalized(config.pauli_weights_2q);
    for (std::size_t i = 1; i < 16; ++i) {
      if (w[i - 1] > 0.0) ops.push_back(std::sqrt(p * w[i - 1]) * kron2(pauli[i / 4], pauli[i % 4]));
    }
  }
  return KrausChannel(std::move(ops));
}

KrausChannel gate_channel(const CalibrationSnapshot& snapshot, GateKind kind,
                          std::span<const int> physical_qubits, PulseShape shape, NoiseScale ns,
                          const NoiseConfig& config) {
  const std::size_t arity = kind == GateKind::CZ ? 2 : 1;
  if (physical_qubits.size() != arity) {
    throw Error(ErrorCode::InvalidTargets, std::string(to_string(kind)) + " expects " +
                                               std::to_string(arity) + " qubit(s)");
  }
  if (kind == GateKind::RZ) {
    snapshot.qubit(physical_qubits[0]);
    return KrausChannel::identity(1);
  }
  if (kind == GateKind::Measure) {
    const auto& q = snapshot.qubit(physical_qubits[0]);
    return thermal_relaxation_channel(q.t1_us, q.t2_us, q.dur_meas_us, ns);
  }
  const double factor = config.shape_factors.at(*gate_class(kind), shape);
  if (kind == GateKind::CZ) {
    const auto& e = snapshot.edge(physical_qubits[0], physical_qubits[1]);
    const auto& qa = snapshot.qubit(physical_qubits[0]);
    const auto& qb = snapshot.qubit(physical_qubits[1]);
    const double coherence = 0.5 * (coherence_error(qa.t1_us, qa.t2_us, e.dur_2q_us) +
                                    coherence_error(qb.t1_us, qb.t2_us, e.dur_2q_us));
    const KrausChannel relax = tensor(thermal_relaxation_channel(qa.t1_us, qa.t2_us, e.dur_2q_us, ns),
                                      thermal_relaxation_channel(qb.t1_us, qb.t2_us, e.dur_2q_us, ns));
    const KrausChannel residual =
        residual_pauli_channel(e.err_2q, std::min(coherence, 0.5), factor, ns, 2, config);
    return compact(relax.then(residual));
  }
  const auto& q = snapshot.qubit(physical_qubits[0]);
  const double coherence = coherence_error(q.t1_us, q.t2_us, q.dur_1q_us);
  const KrausChannel relax = thermal_relaxation_channel(q.t1_us, q.t2_us, q.dur_1q_us, ns);
  const KrausChannel residual =
      residual_pauli_channel(q.err_1q, std::min(coherence, 0.5), factor, ns, 1, config);
  return compact(relax.then(residual));
}

Confusion confusion(const CalibrationSnapshot& snapshot, int qubit, NoiseScale ns,
                    double readout_factor) {
  const auto& q = snapshot.qubit(qubit);
  const double scale = ns.value() * readout_factor;
  const double e01 = std::clamp(scale * q.readout_e01, 0.0, 0.5);
  const double e10 = std::clamp(scale * q.readout_e10, 0.0, 0.5);
  Confusion c;
  c << 1.0 - e01, e10, e01, 1.0 - e10;
  return c;
}

} // namespace lfd
