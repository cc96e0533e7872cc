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

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "layerfid/error.hpp"
#include "oracle.hpp"
#include "superop_check.hpp"

namespace lfd {
namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
void expect_code(F&& f, ErrorCode code) {
  try {
    f();
    FAIL() << "expected " << error_code_name(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

DensityMatrix plus_state() {
  Eigen::VectorXcd psi(2);
  psi << 1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2;
  return DensityMatrix::from_pure(1, psi);
}

TEST(InitState, GroundStateForZeroAngles) {
  const auto rho = init_state(1, {0.0, 0.0}, 0);
  EXPECT_NEAR(std::abs(rho(0, 0) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(rho(1, 1)), 0.0, 1e-12);
}

TEST(InitState, FullRotationGivesExcited) {
  const auto rho = init_state(1, {kPi, 0.0}, 0);
  EXPECT_NEAR(rho(1, 1).real(), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(rho(0, 0)), 0.0, 1e-12);
}

TEST(InitState, HalfRotationGivesPlus) {
  // Ry(pi/2)|0> = (|0> + |1>)/sqrt2, so every entry is 1/2.
  const auto rho = init_state(1, {kPi / 2, 0.0}, 0);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(rho(i, j) - 0.5), 0.0, 1e-12);
}

TEST(InitState, OtherQubitsStayInZero) {
  const auto rho = init_state(3, {kPi, 0.0}, 1);
  // |010> has index 2 with qubit 0 as the most significant bit.
  EXPECT_NEAR(rho(2, 2).real(), 1.0, 1e-12);
}

TEST(InitState, RejectsBadDimension) {
  expect_code([] { init_state(0, {}, 0); }, ErrorCode::InvalidDimension);
  expect_code([] { init_state(7, {}, 0); }, ErrorCode::InvalidDimension);
  expect_code([] { init_state(2, {}, 2); }, ErrorCode::InvalidTargets);
}

TEST(ApplyUnitary, XFlipsGround) {
  const std::array<int, 1> t{0};
  const auto rho = apply_unitary(DensityMatrix(1), gates::x(), t);
  EXPECT_NEAR(rho(1, 1).real(), 1.0, 1e-12);
}

TEST(ApplyUnitary, CzOnPlusPlus) {
  const std::array<int, 1> q0{0}, q1{1};
  const std::array<int, 2> both{0, 1};
  auto rho = apply_unitary(DensityMatrix(2), gates::h(), q0);
  rho = apply_unitary(std::move(rho), gates::h(), q1);
  rho = apply_unitary(std::move(rho), gates::cz(), both);
  Eigen::VectorXcd target(4);
  target << 0.5, 0.5, 0.5, -0.5;
  const Complex f = target.dot(rho.data() * target);
  EXPECT_NEAR(f.real(), 1.0, 1e-12);
}

TEST(ApplyUnitary, TargetOrderSelectsControl) {
  // CX with control 1, target 0 on |01> gives |11>.
  const std::array<int, 1> q1{1};
  const std::array<int, 2> rev{1, 0};
  auto rho = apply_unitary(DensityMatrix(2), gates::x(), q1);
  rho = apply_unitary(std::move(rho), gates::cx(), rev);
  EXPECT_NEAR(rho(3, 3).real(), 1.0, 1e-12);
}

TEST(ApplyUnitary, IdentityLeavesStateUnchanged) {
  std::mt19937_64 rng(5);
  const Matrix u = oracle::random_unitary(8, rng);
  const auto rho = DensityMatrix::from_pure(3, u.col(0));
  const std::array<int, 2> t{2, 0};
  const auto out = apply_unitary(rho, gates::identity(2), t);
  EXPECT_LT((out.data() - rho.data()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ApplyUnitary, Errors) {
  const std::array<int, 1> q0{0};
  const std::array<int, 2> dup{0, 0};
  const std::array<int, 1> far{3};
  Matrix bad = gates::x();
  bad(0, 1) = 2.0;
  expect_code([&] { apply_unitary(DensityMatrix(1), bad, q0); }, ErrorCode::NonUnitary);
  expect_code([&] { apply_unitary(DensityMatrix(2), gates::cz(), dup); }, ErrorCode::InvalidTargets);
  expect_code([&] { apply_unitary(DensityMatrix(2), gates::x(), far); }, ErrorCode::InvalidTargets);
  expect_code([&] { apply_unitary(DensityMatrix(2), gates::cz(), q0); }, ErrorCode::InvalidTargets);
}

TEST(ApplyChannel, IdentityChannel) {
  const auto rho = plus_state();
  const std::array<int, 1> t{0};
  const auto out = apply_channel(rho, KrausChannel::identity(1), t);
  EXPECT_LT((out.data() - rho.data()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ApplyChannel, AmplitudeDampingOnExcited) {
  const double gamma = 0.2;
  Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  const std::array<int, 1> t{0};
  auto rho = apply_unitary(DensityMatrix(1), gates::x(), t);
  rho = apply_channel(std::move(rho), KrausChannel({k0, k1}), t);
  EXPECT_NEAR(rho(0, 0).real(), 0.2, 1e-12);
  EXPECT_NEAR(rho(1, 1).real(), 0.8, 1e-12);
  EXPECT_NEAR(std::abs(rho(0, 1)), 0.0, 1e-12);
}

TEST(ApplyChannel, FullDephasing) {
  const std::array<int, 1> t{0};
  const KrausChannel dephase({std::sqrt(0.5) * gates::identity(1), std::sqrt(0.5) * gates::z()});
  const auto rho = apply_channel(plus_state(), dephase, t);
  EXPECT_NEAR(rho(0, 0).real(), 0.5, 1e-12);
  EXPECT_NEAR(rho(1, 1).real(), 0.5, 1e-12);
  EXPECT_NEAR(std::abs(rho(0, 1)), 0.0, 1e-12);
}

TEST(KrausChannel, RejectsIncompleteSet) {
  expect_code([] { KrausChannel({0.5 * gates::identity(1)}); }, ErrorCode::NotCPTP);
  expect_code([] { KrausChannel({gates::identity(1), gates::identity(2)}); }, ErrorCode::InvalidDimension);
}

TEST(KrausChannel, CompressionPreservesSuperoperator) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ops = oracle::random_kraus(4, 12, rng);
    const KrausChannel ch(ops);
    const KrausChannel small = ch.compressed();
    EXPECT_LE(small.operators().size(), 16u);
    EXPECT_LT(small.completeness_error(), 1e-12);
    EXPECT_LT((oracle::superop_kraus(small.operators()) - oracle::superop_kraus(ops)).cwiseAbs().maxCoeff(),
              1e-12);
  }
}

TEST(KrausChannel, TensorMatchesKronecker) {
  std::mt19937_64 rng(3);
  const KrausChannel a(oracle::random_kraus(2, 2, rng));
  const KrausChannel b(oracle::random_kraus(2, 3, rng));
  const KrausChannel ab = tensor(a, b);
  std::vector<Matrix> expected;
  for (const auto& ka : a.operators())
    for (const auto& kb : b.operators()) expected.push_back(oracle::kron(ka, kb));
  EXPECT_LT((oracle::superop_kraus(ab.operators()) - oracle::superop_kraus(expected)).cwiseAbs().maxCoeff(),
            1e-13);
}

TEST(Measure, GroundStateIdentityConfusion) {
  const auto branches = measure_instrument(DensityMatrix(1), 0, Confusion::Identity());
  ASSERT_EQ(branches.size(), 2u);
  EXPECT_EQ(branches[0].recorded, 0);
  EXPECT_NEAR(branches[0].probability, 1.0, 1e-12);
  ASSERT_TRUE(branches[0].post_state.has_value());
  EXPECT_NEAR((*branches[0].post_state)(0, 0).real(), 1.0, 1e-12);
  EXPECT_EQ(branches[1].probability, 0.0);
  EXPECT_FALSE(branches[1].post_state.has_value());
}

TEST(Measure, PlusStateSplitsEvenly) {
  const auto branches = measure_instrument(plus_state(), 0, Confusion::Identity());
  EXPECT_NEAR(branches[0].probability, 0.5, 1e-12);
  EXPECT_NEAR(branches[1].probability, 0.5, 1e-12);
  EXPECT_NEAR((*branches[1].post_state)(1, 1).real(), 1.0, 1e-12);
}

TEST(Measure, MisreadGroundState) {
  Confusion c;
  c << 0.97, 0.0, 0.03, 1.0;
  const auto branches = measure_instrument(DensityMatrix(1), 0, c);
  EXPECT_NEAR(branches[1].probability, 0.03, 1e-12);
  ASSERT_TRUE(branches[1].post_state.has_value());
  // The true state was |0>, so the misread branch still holds |0><0|.
  EXPECT_NEAR((*branches[1].post_state)(0, 0).real(), 1.0, 1e-12);
}

TEST(Measure, RejectsNonStochasticConfusion) {
  Confusion c;
  c << 0.9, 0.0, 0.2, 1.0;
  expect_code([&] { measure_instrument(DensityMatrix(1), 0, c); }, ErrorCode::InvalidConfusion);
  c << 1.2, 0.0, -0.2, 1.0;
  expect_code([&] { measure_instrument(DensityMatrix(1), 0, c); }, ErrorCode::InvalidConfusion);
}

TEST(Measure, BornRuleAndNormalizationProperty) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> unit(0.0, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 3;
    const Matrix u = oracle::random_unitary(Eigen::Index{1} << n, rng);
    const auto rho = DensityMatrix::from_pure(n, u.col(0));
    const int q = trial % n;
    const auto ideal = measure_instrument(rho, q, Confusion::Identity());
    double p1 = 0.0;
    for (std::size_t i = 0; i < rho.dim(); ++i) {
      if ((i >> (n - 1 - q)) & 1U) p1 += rho(i, i).real();
    }
    EXPECT_NEAR(ideal[1].probability, p1, 1e-12);
    Confusion c;
    const double e01 = unit(rng), e10 = unit(rng);
    c << 1 - e01, e10, e01, 1 - e10;
    const auto noisy = measure_instrument(rho, q, c);
    EXPECT_NEAR(noisy[0].probability + noisy[1].probability, 1.0, 1e-10);
    EXPECT_NEAR(noisy[1].probability, (1 - e10) * p1 + e01 * (1 - p1), 1e-12);
  }
}

TEST(PartialTrace, Examples) {
  const std::array<int, 1> keep0{0}, keep1{1};
  const auto reduced = partial_trace(DensityMatrix(2), keep0);
  EXPECT_NEAR(reduced(0, 0).real(), 1.0, 1e-12);

  Eigen::VectorXcd bell = Eigen::VectorXcd::Zero(4);
  bell(0) = bell(3) = 1.0 / std::numbers::sqrt2;
  const auto pair = DensityMatrix::from_pure(2, bell);
  for (const auto& keep : {keep0, keep1}) {
    const auto r = partial_trace(pair, keep);
    EXPECT_LT((r.data() - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
  }

  const std::array<int, 1> h1{1};
  const auto product = apply_unitary(DensityMatrix(2), gates::h(), h1);
  const auto r = partial_trace(product, keep1);
  EXPECT_LT((r.data() - plus_state().data()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PartialTrace, KeepOrderIsRespected) {
  // |01> keeping (1, 0) is |10>.
  const std::array<int, 1> q1{1};
  const std::array<int, 2> rev{1, 0};
  const auto rho = apply_unitary(DensityMatrix(2), gates::x(), q1);
  const auto out = partial_trace(rho, rev);
  EXPECT_NEAR(out(2, 2).real(), 1.0, 1e-12);
}

TEST(PartialTrace, RejectsEmptyKeep) {
  expect_code([] { partial_trace(DensityMatrix(2), std::span<const int>{}); }, ErrorCode::InvalidTargets);
}

TEST(Fidelity, Examples) {
  EXPECT_NEAR(fidelity(plus_state(), {kPi / 2, 0.0}), 1.0, 1e-12);
  const DensityMatrix mixed(1, 0.5 * Matrix::Identity(2, 2));
  EXPECT_NEAR(fidelity(mixed, {1.234, 4.321}), 0.5, 1e-12);
  // Off-diagonal shrunk to d/2 with d = 0.9 gives (1 + d)/2.
  Matrix dephased = plus_state().data();
  dephased(0, 1) *= 0.9;
  dephased(1, 0) *= 0.9;
  EXPECT_NEAR(fidelity(DensityMatrix(1, dephased), {kPi / 2, 0.0}), 0.95, 1e-12);
}

TEST(Fidelity, RejectsMultiQubitState) {
  expect_code([] { fidelity(DensityMatrix(2), {}); }, ErrorCode::InvalidDimension);
}

TEST(Fidelity, GlobalPhaseInvariance) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> th(0.0, kPi), ph(0.0, 2 * kPi);
  for (int trial = 0; trial < 20; ++trial) {
    const StatePrep prep{th(rng), ph(rng)};
    const Matrix u = oracle::random_unitary(2, rng);
    const auto rho = DensityMatrix::from_pure(1, u.col(0));
    EXPECT_NEAR(fidelity(rho, prep), fidelity(rho, {prep.theta, prep.phi + 2 * kPi}), 1e-12);
    // Conjugating the state by a pure global phase leaves it unchanged.
    const std::array<int, 1> t{0};
    const Matrix phase = std::polar(1.0, ph(rng)) * gates::identity(1);
    EXPECT_NEAR(fidelity(apply_unitary(rho, phase, t), prep), fidelity(rho, prep), 1e-12);
  }
}

TEST(Invariants, CptpPreservationOnRandomSequences) {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> pick(0, 5);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % kMaxQubits;
    DensityMatrix rho(n);
    for (int step = 0; step < 12; ++step) {
      const int a = static_cast<int>(rng() % static_cast<unsigned>(n));
      int b = static_cast<int>(rng() % static_cast<unsigned>(n));
      const bool two = n > 1 && pick(rng) % 2 == 0;
      if (two && b == a) b = (a + 1) % n;
      const std::vector<int> targets = two ? std::vector<int>{a, b} : std::vector<int>{a};
      const Eigen::Index d = two ? 4 : 2;
      if (pick(rng) < 3) {
        rho = apply_unitary(std::move(rho), oracle::random_unitary(d, rng), targets);
      } else {
        rho = apply_channel(std::move(rho), KrausChannel(oracle::random_kraus(d, 3, rng)), targets);
      }
      ASSERT_NEAR(rho.trace(), 1.0, kAccumTol);
      ASSERT_LE(rho.hermiticity_error(), kAlgebraTol);
    }
    EXPECT_GE(rho.min_eigenvalue(), -kPsdTol);
  }
}

TEST(Invariants, SuperoperatorOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    EXPECT_LE(testing_support::random_superop_trial(rng), 1e-10) << "trial " << trial;
  }
}

} // namespace
} // namespace lfd
