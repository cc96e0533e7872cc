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
 * @file    qsim.hpp
 * @brief   Dense density-matrix engine: unitaries, Kraus channels,
 *          confusion-matrix measurement instruments, partial trace, fidelity.
 *
 * Basis convention: qubit 0 is the most significant bit of a basis index.
 * For n qubits, qubit q occupies bit (n - 1 - q). Multi-qubit operators
 * passed with a target list act with targets[0] as their most significant
 * qubit, so `cx()` on targets {c, t} is a CNOT controlled by c.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lfd {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Column-stochastic readout matrix, entry (recorded, true).
using Confusion = Eigen::Matrix2d;

inline constexpr int kMaxQubits = 6;
inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kAccumTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;

/// Input state cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
struct StatePrep {
  double theta = 0.0;
  double phi = 0.0;

  /// Throws InvalidArgument unless theta in [0, pi] and phi in [0, 2 pi).
  void validate() const;

  friend bool operator==(const StatePrep&, const StatePrep&) = default;
};

class DensityMatrix {
public:
  /// |0...0><0...0| on n qubits.
  explicit DensityMatrix(int n_qubits);
  DensityMatrix(int n_qubits, Matrix data);

  static DensityMatrix from_pure(int n_qubits, const Eigen::VectorXcd& psi);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return std::size_t{1} << n_qubits_; }
  const Matrix& data() const noexcept { return data_; }
  Matrix& mutable_data() noexcept { return data_; }
  Complex operator()(std::size_t row, std::size_t col) const {
    return data_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }

  double trace() const { return data_.trace().real(); }
  /// max |rho_ij - conj(rho_ji)|
  double hermiticity_error() const;
  double min_eigenvalue() const;

private:
  int n_qubits_;
  Matrix data_;
};

class KrausChannel {
public:
  /// Throws InvalidDimension for mixed or unsupported sizes and NotCPTP when
  /// sum K^dag K deviates from identity by more than kAlgebraTol.
  explicit KrausChannel(std::vector<Matrix> operators);

  static KrausChannel identity(int n_qubits);

  int n_qubits() const noexcept { return n_qubits_; }
  const std::vector<Matrix>& operators() const noexcept { return ops_; }
  double completeness_error() const;
  bool is_identity(double tol = kAlgebraTol) const;

  /// Channel that applies *this first, then `next`.
  KrausChannel then(const KrausChannel& next) const;
  /// Minimal Kraus representation from the Choi spectrum (rank <= d^2).
  KrausChannel compressed() const;

private:
  int n_qubits_ = 0;
  std::vector<Matrix> ops_;
};

/// Independent action: `first` on the more significant qubit.
KrausChannel tensor(const KrausChannel& first, const KrausChannel& second);

struct MeasurementBranch {
  int recorded = 0;
  double probability = 0.0;
  /// Empty when the branch has zero probability.
  std::optional<DensityMatrix> post_state;
};

namespace gates {
Matrix identity(int n_qubits);
Matrix x();
Matrix y();
Matrix z();
Matrix h();
Matrix sx();
Matrix rz(double angle);
Matrix ry(double angle);
Matrix cx();
Matrix cz();
} // namespace gates

/// All qubits in |0> except `prep_qubit`, which is Rz(phi) Ry(theta)|0>.
DensityMatrix init_state(int n_qubits, const StatePrep& prep, int prep_qubit);

DensityMatrix apply_unitary(DensityMatrix rho, const Matrix& u, std::span<const int> targets);
DensityMatrix apply_channel(DensityMatrix rho, const KrausChannel& channel,
                            std::span<const int> targets);

/// Unnormalized post-measurement state for one recorded outcome: the trace
/// equals the probability of recording `recorded`. The qubit is projected,
/// not traced out.
DensityMatrix project_recorded(const DensityMatrix& rho, int qubit, const Confusion& confusion,
                               int recorded);

/// Both recorded outcomes, indexed by recorded bit.
std::vector<MeasurementBranch> measure_instrument(const DensityMatrix& rho, int qubit,
                                                  const Confusion& confusion);

/// Reduced state on `keep`; keep[0] becomes qubit 0 of the result.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

/// <psi(theta, phi)| rho |psi(theta, phi)> clamped to [0, 1].
double fidelity(const DensityMatrix& rho, const StatePrep& prep);

Eigen::VectorXcd state_vector(const StatePrep& prep);

void validate_confusion(const Confusion& confusion);

} // namespace lfd
