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

#include "layerfid/qsim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "layerfid/error.hpp"

namespace lfd {

namespace {

using Index = Eigen::Index;

void check_qubit_count(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw Error(ErrorCode::InvalidDimension,
                "qubit count " + std::to_string(n_qubits) + " outside 1.." +
                    std::to_string(kMaxQubits));
  }
}

int qubits_for_dim(Index dim) {
  for (int n = 1; n <= kMaxQubits; ++n) {
    if (Index{1} << n == dim) return n;
  }
  return -1;
}

void check_targets(std::span<const int> targets, int n_qubits, std::size_t expected) {
  if (targets.size() != expected) {
    throw Error(ErrorCode::InvalidTargets, "operator acts on " + std::to_string(expected) +
                                               " qubits but " + std::to_string(targets.size()) +
                                               " targets given");
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= n_qubits) {
      throw Error(ErrorCode::InvalidTargets,
                  "target " + std::to_string(targets[i]) + " out of range");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (targets[i] == targets[j]) {
        throw Error(ErrorCode::InvalidTargets, "duplicate target " + std::to_string(targets[i]));
      }
    }
  }
}

// Row indices touched by a k-local operator: for every assignment of the
// non-target bits, the 2^k indices ordered by the operator's local basis.
std::vector<std::vector<Index>> index_groups(int n_qubits, std::span<const int> targets) {
  const Index dim = Index{1} << n_qubits;
  const auto k = static_cast<int>(targets.size());
  const Index local = Index{1} << k;
  std::vector<Index> masks(targets.size());
  Index target_mask = 0;
  for (int i = 0; i < k; ++i) {
    masks[static_cast<std::size_t>(i)] = Index{1} << (n_qubits - 1 - targets[static_cast<std::size_t>(i)]);
    target_mask |= masks[static_cast<std::size_t>(i)];
  }
  std::vector<std::vector<Index>> groups;
  groups.reserve(static_cast<std::size_t>(dim / local));
  for (Index base = 0; base < dim; ++base) {
    if (base & target_mask) continue;
    std::vector<Index> group(static_cast<std::size_t>(local));
    for (Index l = 0; l < local; ++l) {
      Index idx = base;
      for (int i = 0; i < k; ++i) {
        if (l & (Index{1} << (k - 1 - i))) idx |= masks[static_cast<std::size_t>(i)];
      }
      group[static_cast<std::size_t>(l)] = idx;
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

// (op (x) I) * m
Matrix apply_left(const Matrix& m, const Matrix& op, const std::vector<std::vector<Index>>& groups) {
  Matrix out(m.rows(), m.cols());
  const Index local = op.rows();
  Matrix block(local, m.cols());
  for (const auto& group : groups) {
    for (Index l = 0; l < local; ++l) block.row(l) = m.row(group[static_cast<std::size_t>(l)]);
    const Matrix mixed = op * block;
    for (Index l = 0; l < local; ++l) out.row(group[static_cast<std::size_t>(l)]) = mixed.row(l);
  }
  return out;
}

// m * (op (x) I)^dag
Matrix apply_right_adjoint(const Matrix& m, const Matrix& op,
                           const std::vector<std::vector<Index>>& groups) {
  Matrix out(m.rows(), m.cols());
  const Index local = op.rows();
  const Matrix op_dag = op.adjoint();
  Matrix block(m.rows(), local);
  for (const auto& group : groups) {
    for (Index l = 0; l < local; ++l) block.col(l) = m.col(group[static_cast<std::size_t>(l)]);
    const Matrix mixed = block * op_dag;
    for (Index l = 0; l < local; ++l) out.col(group[static_cast<std::size_t>(l)]) = mixed.col(l);
  }
  return out;
}

Matrix conjugate_by(const Matrix& rho, const Matrix& op,
                    const std::vector<std::vector<Index>>& groups) {
  return apply_right_adjoint(apply_left(rho, op, groups), op, groups);
}

} // namespace

void StatePrep::validate() const {
  const double two_pi = 2.0 * std::numbers::pi;
  if (!(theta >= 0.0 && theta <= std::numbers::pi) || !(phi >= 0.0 && phi < two_pi)) {
    throw Error(ErrorCode::InvalidArgument, "state preparation requires theta in [0, pi] and "
                                            "phi in [0, 2pi)");
  }
}

DensityMatrix::DensityMatrix(int n_qubits) : n_qubits_(n_qubits) {
  check_qubit_count(n_qubits);
  const auto d = static_cast<Index>(dim());
  data_ = Matrix::Zero(d, d);
  data_(0, 0) = 1.0;
}

DensityMatrix::DensityMatrix(int n_qubits, Matrix data) : n_qubits_(n_qubits), data_(std::move(data)) {
  check_qubit_count(n_qubits);
  const auto d = static_cast<Index>(dim());
  if (data_.rows() != d || data_.cols() != d) {
    throw Error(ErrorCode::InvalidDimension, "density matrix must be " + std::to_string(d) + "x" +
                                                 std::to_string(d));
  }
}

DensityMatrix DensityMatrix::from_pure(int n_qubits, const Eigen::VectorXcd& psi) {
  return DensityMatrix(n_qubits, psi * psi.adjoint());
}

double DensityMatrix::hermiticity_error() const {
  return (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const Matrix herm = 0.5 * (data_ + data_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

KrausChannel::KrausChannel(std::vector<Matrix> operators) : ops_(std::move(operators)) {
  if (ops_.empty()) throw Error(ErrorCode::NotCPTP, "Kraus channel needs at least one operator");
  const Index d = ops_.front().rows();
  if (d != 2 && d != 4) {
    throw Error(ErrorCode::InvalidDimension, "Kraus operators must be 2x2 or 4x4");
  }
  for (const auto& k : ops_) {
    if (k.rows() != d || k.cols() != d) {
      throw Error(ErrorCode::InvalidDimension, "Kraus operators have mismatched dimensions");
    }
  }
  n_qubits_ = qubits_for_dim(d);
  const double err = completeness_error();
  if (!(err <= kAlgebraTol)) {
    throw Error(ErrorCode::NotCPTP, "Kraus completeness violated by " + std::to_string(err));
  }
}

KrausChannel KrausChannel::identity(int n_qubits) {
  if (n_qubits != 1 && n_qubits != 2) {
    throw Error(ErrorCode::InvalidDimension, "channels act on 1 or 2 qubits");
  }
  return KrausChannel({gates::identity(n_qubits)});
}

double KrausChannel::completeness_error() const {
  if (ops_.empty()) return 1.0;
  const Index d = ops_.front().rows();
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& k : ops_) sum += k.adjoint() * k;
  return (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

bool KrausChannel::is_identity(double tol) const {
  // A channel is the identity iff its Choi matrix is rank one on vec(I);
  // equivalently every Kraus operator is proportional to I.
  const Index d = ops_.front().rows();
  for (const auto& k : ops_) {
    const Complex c = k.trace() / static_cast<double>(d);
    if ((k - c * Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

KrausChannel KrausChannel::then(const KrausChannel& next) const {
  if (next.n_qubits_ != n_qubits_) {
    throw Error(ErrorCode::InvalidDimension, "cannot compose channels of different width");
  }
  std::vector<Matrix> ops;
  ops.reserve(ops_.size() * next.ops_.size());
  for (const auto& b : next.ops_) {
    for (const auto& a : ops_) ops.push_back(b * a);
  }
  return KrausChannel(std::move(ops));
}

KrausChannel KrausChannel::compressed() const {
  const Index d = ops_.front().rows();
  const Index d2 = d * d;
  Matrix choi = Matrix::Zero(d2, d2);
  for (const auto& k : ops_) {
    const Eigen::Map<const Eigen::VectorXcd> v(k.data(), d2);
    choi.noalias() += v * v.adjoint();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(choi);
  const double scale = std::max(1.0, solver.eigenvalues().cwiseAbs().maxCoeff());
  std::vector<Matrix> ops;
  for (Index i = d2 - 1; i >= 0; --i) {
    const double lambda = solver.eigenvalues()(i);
    if (lambda <= 1e-15 * scale) continue;
    Eigen::VectorXcd v = std::sqrt(lambda) * solver.eigenvectors().col(i);
    ops.emplace_back(Eigen::Map<Matrix>(v.data(), d, d));
  }
  return KrausChannel(std::move(ops));
}

KrausChannel tensor(const KrausChannel& first, const KrausChannel& second) {
  if (first.n_qubits() != 1 || second.n_qubits() != 1) {
    throw Error(ErrorCode::InvalidDimension, "tensor product is defined for 1-qubit channels");
  }
  std::vector<Matrix> ops;
  ops.reserve(first.operators().size() * second.operators().size());
  for (const auto& a : first.operators()) {
    for (const auto& b : second.operators()) {
      Matrix k(4, 4);
      for (Index i = 0; i < 2; ++i)
        for (Index j = 0; j < 2; ++j) k.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
      ops.push_back(std::move(k));
    }
  }
  return KrausChannel(std::move(ops));
}

namespace gates {

Matrix identity(int n_qubits) {
  const Index d = Index{1} << n_qubits;
  return Matrix::Identity(d, d);
}

Matrix x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Matrix z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix h() {
  const double s = 1.0 / std::numbers::sqrt2;
  Matrix m(2, 2);
  m << s, s, s, -s;
  return m;
}

Matrix sx() {
  const Complex a(0.5, 0.5);
  const Complex b(0.5, -0.5);
  Matrix m(2, 2);
  m << a, b, b, a;
  return m;
}

Matrix rz(double angle) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = std::polar(1.0, -angle / 2.0);
  m(1, 1) = std::polar(1.0, angle / 2.0);
  return m;
}

Matrix ry(double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  Matrix m(2, 2);
  m << c, -s, s, c;
  return m;
}

Matrix cx() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return m;
}

Matrix cz() {
  Matrix m = Matrix::Identity(4, 4);
  m(3, 3) = -1.0;
  return m;
}

} // namespace gates

Eigen::VectorXcd state_vector(const StatePrep& prep) {
  Eigen::VectorXcd psi(2);
  psi(0) = std::cos(prep.theta / 2.0);
  psi(1) = std::polar(std::sin(prep.theta / 2.0), prep.phi);
  return psi;
}

DensityMatrix init_state(int n_qubits, const StatePrep& prep, int prep_qubit) {
  check_qubit_count(n_qubits);
  if (prep_qubit < 0 || prep_qubit >= n_qubits) {
    throw Error(ErrorCode::InvalidTargets, "preparation qubit out of range");
  }
  const std::array<int, 1> target{prep_qubit};
  DensityMatrix rho(n_qubits);
  rho = apply_unitary(std::move(rho), gates::ry(prep.theta), target);
  return apply_unitary(std::move(rho), gates::rz(prep.phi), target);
}

DensityMatrix apply_unitary(DensityMatrix rho, const Matrix& u, std::span<const int> targets) {
  const int k = qubits_for_dim(u.rows());
  if (u.rows() != u.cols() || (k != 1 && k != 2)) {
    throw Error(ErrorCode::InvalidDimension, "unitary must be 2x2 or 4x4");
  }
  check_targets(targets, rho.n_qubits(), static_cast<std::size_t>(k));
  if ((u.adjoint() * u - Matrix::Identity(u.rows(), u.rows())).cwiseAbs().maxCoeff() > kAlgebraTol) {
    throw Error(ErrorCode::NonUnitary, "operator is not unitary");
  }
  const auto groups = index_groups(rho.n_qubits(), targets);
  rho.mutable_data() = conjugate_by(rho.data(), u, groups);
  return rho;
}

DensityMatrix apply_channel(DensityMatrix rho, const KrausChannel& channel,
                            std::span<const int> targets) {
  check_targets(targets, rho.n_qubits(), static_cast<std::size_t>(channel.n_qubits()));
  if (channel.completeness_error() > kAlgebraTol) {
    throw Error(ErrorCode::NotCPTP, "channel violates Kraus completeness");
  }
  if (channel.operators().size() == 1 && channel.is_identity(0.0)) return rho;
  const auto groups = index_groups(rho.n_qubits(), targets);
  Matrix sum = Matrix::Zero(rho.data().rows(), rho.data().cols());
  for (const auto& k : channel.operators()) sum += conjugate_by(rho.data(), k, groups);
  rho.mutable_data() = std::move(sum);
  return rho;
}

void validate_confusion(const Confusion& confusion) {
  for (int col = 0; col < 2; ++col) {
    for (int row = 0; row < 2; ++row) {
      const double v = confusion(row, col);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorCode::InvalidConfusion, "confusion entries must lie in [0, 1]");
      }
    }
    if (std::abs(confusion(0, col) + confusion(1, col) - 1.0) > kAlgebraTol) {
      throw Error(ErrorCode::InvalidConfusion, "confusion columns must sum to 1");
    }
  }
}

DensityMatrix project_recorded(const DensityMatrix& rho, int qubit, const Confusion& confusion,
                               int recorded) {
  if (qubit < 0 || qubit >= rho.n_qubits()) {
    throw Error(ErrorCode::InvalidTargets, "measured qubit out of range");
  }
  if (recorded != 0 && recorded != 1) {
    throw Error(ErrorCode::InvalidArgument, "recorded bit must be 0 or 1");
  }
  validate_confusion(confusion);
  // Sum_t P(recorded | t) P_t rho P_t keeps the block where both row and
  // column carry bit value t, weighted per t.
  const Index mask = Index{1} << (rho.n_qubits() - 1 - qubit);
  const Index d = rho.data().rows();
  Matrix out = Matrix::Zero(d, d);
  const std::array<double, 2> weight{confusion(recorded, 0), confusion(recorded, 1)};
  for (Index c = 0; c < d; ++c) {
    const bool cbit = (c & mask) != 0;
    for (Index r = 0; r < d; ++r) {
      if (((r & mask) != 0) != cbit) continue;
      out(r, c) = weight[cbit ? 1 : 0] * rho.data()(r, c);
    }
  }
  return DensityMatrix(rho.n_qubits(), std::move(out));
}

std::vector<MeasurementBranch> measure_instrument(const DensityMatrix& rho, int qubit,
                                                  const Confusion& confusion) {
  std::vector<MeasurementBranch> branches;
  branches.reserve(2);
  for (int recorded = 0; recorded < 2; ++recorded) {
    DensityMatrix sigma = project_recorded(rho, qubit, confusion, recorded);
    MeasurementBranch branch;
    branch.recorded = recorded;
    branch.probability = std::max(0.0, sigma.trace());
    if (branch.probability > 0.0) {
      sigma.mutable_data() /= branch.probability;
      branch.post_state = std::move(sigma);
    }
    branches.push_back(std::move(branch));
  }
  return branches;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  const int n = rho.n_qubits();
  if (keep.empty()) throw Error(ErrorCode::InvalidTargets, "partial trace must keep a qubit");
  check_targets(keep, n, keep.size());

  std::vector<int> traced;
  for (int q = 0; q < n; ++q) {
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);
  }
  const auto k = static_cast<int>(keep.size());
  const Index out_dim = Index{1} << k;
  const Index env_dim = Index{1} << traced.size();

  auto compose = [&](Index kept_bits, Index env_bits) {
    Index idx = 0;
    for (int i = 0; i < k; ++i) {
      if (kept_bits & (Index{1} << (k - 1 - i))) idx |= Index{1} << (n - 1 - keep[static_cast<std::size_t>(i)]);
    }
    const auto t = static_cast<int>(traced.size());
    for (int i = 0; i < t; ++i) {
      if (env_bits & (Index{1} << (t - 1 - i))) idx |= Index{1} << (n - 1 - traced[static_cast<std::size_t>(i)]);
    }
    return idx;
  };

  Matrix out = Matrix::Zero(out_dim, out_dim);
  for (Index i = 0; i < out_dim; ++i) {
    for (Index j = 0; j < out_dim; ++j) {
      Complex acc = 0.0;
      for (Index e = 0; e < env_dim; ++e) acc += rho.data()(compose(i, e), compose(j, e));
      out(i, j) = acc;
    }
  }
  return DensityMatrix(k, std::move(out));
}

double fidelity(const DensityMatrix& rho, const StatePrep& prep) {
  if (rho.n_qubits() != 1) {
    throw Error(ErrorCode::InvalidDimension, "fidelity is defined against a 1-qubit state");
  }
  const Eigen::VectorXcd psi = state_vector(prep);
  const Complex f = psi.dot(rho.data() * psi);
  return std::clamp(f.real(), 0.0, 1.0);
}

} // namespace lfd
