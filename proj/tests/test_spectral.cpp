// Copyright 2026 The gibbsineq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "gibbsineq/spectral.hpp"
#include "gibbsineq/quadrature.hpp"
#include "oracles.hpp"

namespace gi = gibbsineq;

namespace {

gi::Matrix pauli_x() {
  gi::Matrix m = gi::Matrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

}  // namespace

TEST(HermitianOperator, RejectsNonHermitian) {
  gi::Matrix m = pauli_x();
  m(0, 1) = 2.0;
  EXPECT_THROW(gi::HermitianOperator{m}, gi::ValidationError);
}

TEST(HermitianOperator, RejectsNonSquareAndNonFinite) {
  EXPECT_THROW(gi::HermitianOperator{gi::Matrix::Zero(2, 3)}, gi::ValidationError);
  gi::Matrix m = gi::Matrix::Zero(2, 2);
  m(0, 0) = NAN;
  EXPECT_THROW(gi::HermitianOperator{m}, gi::ValidationError);
}

TEST(HermitianOperator, ToleratesRoundoffAsymmetry) {
  gi::Matrix m = pauli_x();
  m(0, 1) += 1e-14;
  EXPECT_NO_THROW(gi::HermitianOperator{m});
}

TEST(HermitianOperator, Arithmetic) {
  const gi::HermitianOperator x(pauli_x());
  const gi::HermitianOperator two = x + x;
  EXPECT_DOUBLE_EQ(two.matrix()(0, 1).real(), 2.0);
  EXPECT_DOUBLE_EQ((x - 0.5 * x).matrix()(1, 0).real(), 0.5);
  EXPECT_NEAR(x.spectral_norm(), 1.0, 1e-15);
  EXPECT_THROW(x + gi::HermitianOperator::identity(3), gi::DimensionError);
}

TEST(Decompose, IdentityIsDegenerateAndUniform) {
  const auto ens = gi::decompose(gi::HermitianOperator::identity(2), 1.0);
  EXPECT_DOUBLE_EQ(ens.eigenvalues()[0], 1.0);
  EXPECT_DOUBLE_EQ(ens.eigenvalues()[1], 1.0);
  EXPECT_DOUBLE_EQ(ens.weights()[0], 0.5);
  EXPECT_DOUBLE_EQ(ens.weights()[1], 0.5);
  EXPECT_TRUE(gi::has_degenerate_pair(ens));
}

TEST(Decompose, PauliX) {
  const auto ens = gi::decompose(gi::HermitianOperator(pauli_x()), 1.0);
  EXPECT_NEAR(ens.eigenvalues()[0], -1.0, 1e-15);
  EXPECT_NEAR(ens.eigenvalues()[1], 1.0, 1e-15);
}

TEST(Decompose, RejectsBadBeta) {
  const gi::HermitianOperator x(pauli_x());
  EXPECT_THROW(gi::decompose(x, 0.0), gi::ValidationError);
  EXPECT_THROW(gi::decompose(x, -1.0), gi::ValidationError);
  EXPECT_THROW(gi::decompose(x, INFINITY), gi::ValidationError);
}

TEST(Decompose, RandomInvariants) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + trial % 11;
    const gi::HermitianOperator h(oracle::random_hermitian(dim, gen));
    for (double beta : {0.1, 2.0, 30.0}) {
      const auto ens = gi::decompose(h, beta);
      const gi::Matrix& u = ens.eigenvectors();
      EXPECT_LE((ens.reconstruct() - h.matrix()).norm(), 1e-10 * h.matrix().norm());
      EXPECT_LE((u.adjoint() * u - gi::Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_NEAR(ens.weights().sum(), 1.0, 1e-12);
      for (int n = 0; n + 1 < dim; ++n) {
        EXPECT_LE(ens.eigenvalues()[n], ens.eigenvalues()[n + 1]);
        EXPECT_GE(ens.weights()[n], ens.weights()[n + 1]);
      }
      EXPECT_GE(ens.weights().minCoeff(), 0.0);
      const double logz = std::log(oracle::expm(-beta * h.matrix()).trace().real());
      if (beta <= 2.0) {
        EXPECT_NEAR(ens.log_z(), logz, 1e-10 * std::max(1.0, std::abs(logz)));
      }
      EXPECT_LE((ens.density_matrix() - oracle::gibbs(h.matrix(), beta)).cwiseAbs().maxCoeff(),
                1e-10);
    }
  }
}

TEST(GibbsWeights, SymmetricPair) {
  gi::RealVector e(2);
  e << 0.0, 0.0;
  const auto w = gi::gibbs_weights(e, 3.0);
  EXPECT_DOUBLE_EQ(w[0], 0.5);
  EXPECT_DOUBLE_EQ(w[1], 0.5);
}

TEST(GibbsWeights, InfiniteTemperatureLimit) {
  gi::RealVector e(4);
  e << -3.0, 0.5, 2.0, 7.0;
  const auto w = gi::gibbs_weights(e, 1e-14);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(w[i], 0.25, 1e-12);
}

TEST(GibbsWeights, TwoLevelClosedForm) {
  const double delta = 1.7, beta = 0.9, x = 0.5 * beta * delta;
  gi::RealVector e(2);
  e << -0.5 * delta, 0.5 * delta;
  const auto w = gi::gibbs_weights(e, beta);
  EXPECT_NEAR(w[0], std::exp(x) / (2 * std::cosh(x)), 1e-15);
  EXPECT_NEAR(w[1], std::exp(-x) / (2 * std::cosh(x)), 1e-15);
}

TEST(GibbsWeights, OverflowSafe) {
  gi::RealVector e(3);
  e << -1e4, 0.0, 1e4;
  const auto w = gi::gibbs_weights(e, 10.0);
  EXPECT_DOUBLE_EQ(w[0], 1.0);
  EXPECT_EQ(w[2], 0.0);
  EXPECT_TRUE(std::isfinite(w.sum()));
}

TEST(DuhamelKernel, DegenerateLimit) {
  EXPECT_DOUBLE_EQ(gi::duhamel_kernel(0.3, 0.3, 2.0), std::exp(-0.6));
  EXPECT_NEAR(gi::duhamel_kernel(0.3, 0.3 + 1e-14, 2.0), std::exp(-0.6), 1e-14);
}

TEST(DuhamelKernel, DirectFormula) {
  EXPECT_NEAR(gi::duhamel_kernel(0.0, std::log(2.0), 1.0), 0.5 / std::log(2.0), 1e-15);
  EXPECT_NEAR(gi::duhamel_kernel(0.0, std::log(2.0), 1.0), 0.721348, 1e-6);
}

TEST(DuhamelKernel, SymmetricAndPositive) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(gen), b = u(gen), beta = 0.01 + std::abs(u(gen));
    const double k = gi::duhamel_kernel(a, b, beta);
    EXPECT_EQ(k, gi::duhamel_kernel(b, a, beta));
    EXPECT_GT(k, 0.0);
    EXPECT_LE(k, std::exp(-beta * std::min(a, b)) * (1 + 1e-15));
    EXPECT_GE(k, std::exp(-beta * std::max(a, b)) * (1 - 1e-15));
  }
}

TEST(XCothX, LimitSeriesAndEvenness) {
  EXPECT_DOUBLE_EQ(gi::xcothx(0.0), 1.0);
  for (double x : {1e-8, 5e-5, 9.9e-5, 1.01e-4, 1e-3, 0.5, 3.0, 40.0, 800.0}) {
    const double direct = x / std::tanh(x);
    EXPECT_NEAR(gi::xcothx(x), direct, 2e-15 * direct) << x;
    EXPECT_EQ(gi::xcothx(x), gi::xcothx(-x));
    EXPECT_GE(gi::xcothx(x), 1.0);
  }
  EXPECT_NEAR(gi::xcothx(1e-3), 1.0 + 1e-6 / 3.0, 1e-13);
}

TEST(EigenbasisRoundTrip, HermitianStaysHermitian) {
  std::mt19937_64 gen(5);
  const gi::HermitianOperator h(oracle::random_hermitian(6, gen));
  const gi::Matrix a = oracle::random_hermitian(6, gen);
  const auto ens = gi::decompose(h, 1.3);
  const auto ab = gi::to_eigenbasis(a, ens);
  EXPECT_LE((ab.elements - ab.elements.adjoint()).cwiseAbs().maxCoeff(), 1e-12 * a.cwiseAbs().maxCoeff());
  EXPECT_LE((gi::from_eigenbasis(ab, ens) - a).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(gi::expectation(ab, ens).real(), oracle::expect(a, h.matrix(), 1.3).real(), 1e-12);
  EXPECT_THROW(gi::to_eigenbasis(gi::Matrix::Zero(3, 3), ens), gi::DimensionError);
}

TEST(CompensatedSum, CancellationIsExact) {
  gi::CompensatedSum<double> s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  EXPECT_DOUBLE_EQ(s.value(), 1.0);
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  const auto rule = gi::gauss_legendre(8, 0.0, 1.0);
  for (int p = 0; p < 16; ++p) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * std::pow(rule.nodes[i], p);
    EXPECT_NEAR(acc, 1.0 / (p + 1), 1e-14) << p;
  }
  const auto r2 = gi::gauss_legendre(64, -1.0, 2.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < r2.nodes.size(); ++i) acc += r2.weights[i] * std::exp(r2.nodes[i]);
  EXPECT_NEAR(acc, std::exp(2.0) - std::exp(-1.0), 1e-13);
}
