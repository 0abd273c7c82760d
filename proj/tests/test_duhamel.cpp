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
#include <random>

#include <gtest/gtest.h>

#include "gibbsineq/duhamel.hpp"
#include "gibbsineq/models.hpp"
#include "oracles.hpp"

namespace gi = gibbsineq;

namespace {

constexpr gi::Complex kI(0.0, 1.0);

gi::Matrix sx() {
  gi::Matrix m = gi::Matrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

gi::Matrix sy() {
  gi::Matrix m = gi::Matrix::Zero(2, 2);
  m(0, 1) = -kI;
  m(1, 0) = kI;
  return m;
}

gi::HermitianOperator spin_t(double delta) { return gi::single_spin(delta).t; }

}  // namespace

TEST(SpectralSum, TrivialCases) {
  std::mt19937_64 gen(1);
  const gi::HermitianOperator h(oracle::random_hermitian(5, gen));
  const auto ens = gi::decompose(h, 0.8);
  EXPECT_EQ(gi::spectral_sum({gi::Matrix::Zero(5, 5)}, ens, gi::SpectralWeight::duhamel()), 0.0);
  EXPECT_NEAR(gi::spectral_sum(gi::to_eigenbasis(gi::Matrix::Identity(5, 5), ens), ens,
                               gi::SpectralWeight::duhamel()),
              1.0, 1e-14);
}

TEST(SpectralSum, MatchesNaiveLoop) {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 20; ++trial) {
    const gi::Matrix h = oracle::random_hermitian(6, gen);
    const gi::Matrix j = oracle::random_general(6, gen);
    const double beta = 0.2 + 0.15 * trial;
    const auto ens = gi::decompose(gi::HermitianOperator(h), beta);
    const auto jb = gi::to_eigenbasis(j, ens);
    for (int idx = 0; idx <= 7; ++idx) {
      const double lib = gi::functional_direct(jb, ens, idx);
      const double ref = oracle::functional(j, h, beta, idx);
      EXPECT_LE(oracle::rel(lib, ref), 1e-12) << "index " << idx << " trial " << trial;
    }
  }
}

TEST(SpectralWeight, CatalogueLimits) {
  const auto d = gi::SpectralWeight::duhamel();
  const auto s = gi::SpectralWeight::symmetric_sum();
  const auto a = gi::SpectralWeight::abs_difference();
  EXPECT_DOUBLE_EQ(d(0.4, 0.4, 2.0), std::exp(-0.8));
  EXPECT_DOUBLE_EQ(s(0.4, 0.4, 2.0), 2 * std::exp(-0.8));
  EXPECT_EQ(a(0.4, 0.4, 2.0), 0.0);
  EXPECT_EQ(s.with_even_power(1)(0.4, 0.4, 2.0), 0.0);
  EXPECT_NEAR(a(0.0, 1.0, 1.0), 1.0 - std::exp(-1.0), 1e-15);
  EXPECT_NEAR(a.with_abs_power(3)(0.0, -1.0, 2.0), (std::exp(2.0) - 1.0) * 8.0, 1e-12);
  EXPECT_THROW(d.with_even_power(-1), gi::ParameterError);
  EXPECT_THROW(d.with_abs_power(-0.5), gi::ParameterError);
  for (double e : {-700.0, 0.0, 700.0}) {
    EXPECT_TRUE(std::isfinite(d(e, e + 1.0, 1.0)));
    EXPECT_TRUE(std::isfinite(a(e, e + 1.0, 1.0)));
  }
}

TEST(BdInner, Normalization) {
  std::mt19937_64 gen(3);
  const gi::HermitianOperator h(oracle::random_hermitian(4, gen));
  const auto ens = gi::decompose(h, 1.5);
  const auto id = gi::to_eigenbasis(gi::Matrix::Identity(4, 4), ens);
  EXPECT_NEAR(gi::bd_inner(id, id, ens).real(), 1.0, 1e-14);
  for (int nodes : {8, 16, 64})
    EXPECT_NEAR(gi::bd_inner_quadrature(gi::Matrix::Identity(4, 4), gi::Matrix::Identity(4, 4), h,
                                        1.5, nodes)
                    .real(),
                1.0, 1e-13);
}

TEST(BdInner, TwoLevelClosedForm) {
  for (double beta : {0.3, 1.0, 4.0}) {
    const double delta = 2.0, x = 0.5 * beta * delta;
    const auto t = spin_t(delta);
    const auto ens = gi::decompose(t, beta);
    const auto a = gi::to_eigenbasis(sx(), ens);
    EXPECT_NEAR(gi::bd_inner(a, a, ens).real(), std::tanh(x) / x, 1e-14);
    EXPECT_NEAR(gi::bd_inner_quadrature(sx(), sx(), t, beta).real(), std::tanh(x) / x, 1e-13);
  }
}

TEST(BdInner, CommutingCollapsesToExpectation) {
  std::mt19937_64 gen(4);
  const gi::Matrix h = oracle::random_hermitian(5, gen);
  const gi::Matrix a = oracle::commuting_partner(h, gen);
  const gi::Matrix b = oracle::commuting_partner(h, gen);
  const auto ens = gi::decompose(gi::HermitianOperator(h), 2.0);
  const gi::Complex lib = gi::bd_inner(gi::to_eigenbasis(a, ens), gi::to_eigenbasis(b, ens), ens);
  const gi::Complex ref = oracle::expect(a.adjoint() * b, h, 2.0);
  EXPECT_NEAR(std::abs(lib - ref), 0.0, 1e-11 * std::abs(ref));
  for (int nodes : {8, 64})
    EXPECT_NEAR(std::abs(gi::bd_inner_quadrature(a, b, gi::HermitianOperator(h), 2.0, nodes) - ref),
                0.0, 1e-11 * std::abs(ref));
}

TEST(BdInner, InnerProductAxioms) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 30; ++trial) {
    const gi::HermitianOperator h(oracle::random_hermitian(5, gen));
    const auto ens = gi::decompose(h, 0.1 + trial * 0.3);
    const auto a = gi::to_eigenbasis(oracle::random_general(5, gen), ens);
    const auto b = gi::to_eigenbasis(oracle::random_general(5, gen), ens);
    const gi::Complex ab = gi::bd_inner(a, b, ens), ba = gi::bd_inner(b, a, ens);
    EXPECT_NEAR(std::abs(ab - std::conj(ba)), 0.0, 1e-13 * std::abs(ab));
    const gi::Complex aa = gi::bd_inner(a, a, ens);
    EXPECT_GE(aa.real(), 0.0);
    EXPECT_EQ(aa.imag(), 0.0);
  }
}

TEST(BdInner, AgreesWithSimpsonOracle) {
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 12; ++trial) {
    const int dim = 3 + trial % 4;
    const gi::Matrix h = oracle::random_hermitian(dim, gen);
    const gi::Matrix a = oracle::random_general(dim, gen);
    const gi::Matrix b = oracle::random_general(dim, gen);
    const double beta = 0.25 * (1 + trial % 5);
    const auto ens = gi::decompose(gi::HermitianOperator(h), beta);
    const gi::Complex lib = gi::bd_inner(gi::to_eigenbasis(a, ens), gi::to_eigenbasis(b, ens), ens);
    const gi::Complex ref = oracle::duhamel_simpson(a, b, h, beta);
    EXPECT_LE(std::abs(lib - ref), 1e-9 * std::abs(ref)) << trial;
  }
}

TEST(BdInner, QuadratureAgreesAcrossTemperatures) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = 4 + 4 * (trial % 3);
    const gi::HermitianOperator h(oracle::random_hermitian(dim, gen));
    const gi::Matrix a = oracle::random_general(dim, gen);
    const gi::Matrix b = oracle::random_general(dim, gen);
    for (double beta : {0.1, 1.0, 10.0}) {
      const auto ens = gi::decompose(h, beta);
      const gi::Complex s = gi::bd_inner(gi::to_eigenbasis(a, ens), gi::to_eigenbasis(b, ens), ens);
      const gi::Complex q = gi::bd_inner_quadrature(a, b, h, beta, 64);
      EXPECT_LE(std::abs(s - q), 1e-10 * std::abs(s));
    }
  }
  EXPECT_THROW(gi::bd_inner_quadrature(sx(), sx(), spin_t(1), 1.0, 4), gi::ParameterError);
  EXPECT_THROW(gi::bd_inner_quadrature(gi::Matrix::Zero(3, 3), sx(), spin_t(1), 1.0),
               gi::DimensionError);
}

TEST(Fluctuation, Examples) {
  const auto t = spin_t(2.0);
  const double beta = 1.0, x = 1.0;
  const auto ens = gi::decompose(t, beta);
  const auto fi = gi::fluctuation(gi::to_eigenbasis(gi::Matrix::Identity(2, 2), ens), ens);
  EXPECT_NEAR(fi.raw, 0.0, 1e-15);
  EXPECT_NEAR(fi.symmetrized, 0.0, 1e-15);
  EXPECT_NEAR(fi.duhamel, 0.0, 1e-15);
  const auto fx = gi::fluctuation(gi::to_eigenbasis(sx(), ens), ens);
  EXPECT_NEAR(fx.raw, 1.0, 1e-14);
  EXPECT_NEAR(fx.symmetrized, 1.0, 1e-14);
  EXPECT_NEAR(fx.duhamel, std::tanh(x) / x, 1e-14);
}

TEST(Fluctuation, OrderingAndCommutativeCollapse) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 40; ++trial) {
    const gi::Matrix h = oracle::random_hermitian(6, gen);
    const auto ens = gi::decompose(gi::HermitianOperator(h), 0.2 + 0.1 * trial);
    const auto f = gi::fluctuation(gi::to_eigenbasis(oracle::random_general(6, gen), ens), ens);
    EXPECT_GE(f.symmetrized - f.duhamel, -1e-12 * f.symmetrized);
    EXPECT_GE(f.duhamel, 0.0);
    const auto c = gi::fluctuation(gi::to_eigenbasis(oracle::commuting_partner(h, gen), ens), ens);
    EXPECT_NEAR(c.raw, c.symmetrized, 1e-12 * std::max(1.0, c.raw));
    EXPECT_NEAR(c.raw, c.duhamel, 1e-12 * std::max(1.0, c.raw));
  }
}

TEST(Fluctuation, MeanSubtraction) {
  // (dA;dA) = (A;A) - |<A>|^2.
  std::mt19937_64 gen(9);
  const gi::HermitianOperator h(oracle::random_hermitian(5, gen));
  const auto ens = gi::decompose(h, 1.1);
  const auto a = gi::to_eigenbasis(oracle::random_general(5, gen), ens);
  const double lhs = gi::fluctuation(a, ens).duhamel;
  const double rhs = gi::bd_inner(a, a, ens).real() - std::norm(gi::expectation(a, ens));
  EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(rhs));
}

TEST(CommutatorChain, Examples) {
  const auto t = spin_t(2.0);
  EXPECT_EQ(gi::commutator_chain(sx(), t, 0), sx());
  const gi::Matrix r1 = gi::commutator_chain(sx(), t, 1);
  EXPECT_LE((r1 - kI * 2.0 * sy()).cwiseAbs().maxCoeff(), 1e-15);
  std::mt19937_64 gen(10);
  const gi::Matrix h = oracle::random_hermitian(5, gen);
  const gi::Matrix c = oracle::commuting_partner(h, gen);
  for (int k = 1; k <= 4; ++k)
    EXPECT_LE(gi::commutator_chain(c, gi::HermitianOperator(h), k).cwiseAbs().maxCoeff(), 1e-11);
  EXPECT_THROW(gi::commutator_chain(sx(), t, 9), gi::ParameterError);
}

TEST(CommutatorChain, EigenbasisIdentity) {
  std::mt19937_64 gen(11);
  const gi::HermitianOperator h(oracle::random_hermitian(6, gen));
  const gi::Matrix j = oracle::random_general(6, gen);
  const auto ens = gi::decompose(h, 1.0);
  const auto jb = gi::to_eigenbasis(j, ens);
  for (int k = 0; k <= 5; ++k) {
    const auto rk = gi::to_eigenbasis(gi::commutator_chain(j, h, k), ens);
    double worst = 0.0;
    for (int m = 0; m < 6; ++m)
      for (int n = 0; n < 6; ++n) {
        const gi::Complex ref =
            std::pow(ens.eigenvalues()[m] - ens.eigenvalues()[n], k) * jb(m, n);
        worst = std::max(worst, std::abs(rk(m, n) - ref));
      }
    EXPECT_LE(worst, 1e-11 * std::pow(1.0 + h.spectral_norm() * 2, k) * jb.elements.cwiseAbs().maxCoeff());
  }
}

TEST(SolveAdjoint, ExamplesAndErrors) {
  const auto t = spin_t(2.0);
  const auto ens = gi::decompose(t, 1.0);
  EXPECT_EQ(gi::solve_adjoint({gi::Matrix::Zero(2, 2)}, ens).elements, gi::Matrix::Zero(2, 2));
  const auto jb = gi::to_eigenbasis(sx(), ens);
  const auto x = gi::solve_adjoint(jb, ens);
  const double e0 = ens.eigenvalues()[0], e1 = ens.eigenvalues()[1];
  EXPECT_NEAR(std::abs(x(0, 1) - jb(0, 1) / (e0 - e1)), 0.0, 1e-15);
  // [H, X] = J, reconstructed in the original basis.
  const gi::Matrix xo = gi::from_eigenbasis(x, ens);
  EXPECT_LE((t.matrix() * xo - xo * t.matrix() - sx()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(gi::solve_adjoint(gi::to_eigenbasis(gi::Matrix::Identity(2, 2), ens), ens),
               gi::UnsolvableError);
  const auto deg = gi::decompose(gi::HermitianOperator::identity(2), 1.0);
  EXPECT_THROW(gi::solve_adjoint(gi::to_eigenbasis(sx(), deg), deg), gi::UnsolvableError);
}

TEST(Functionals, TwoLevelValues) {
  const double beta = 1.0, delta = 2.0, x = 1.0;
  const auto ens = gi::decompose(spin_t(delta), beta);
  const auto j = gi::to_eigenbasis(sx(), ens);
  const auto f0 = gi::functional_even(j, ens, 0);
  EXPECT_NEAR(f0.value_direct, std::tanh(x) / x, 1e-14);
  ASSERT_TRUE(f0.value_commutator.has_value());
  EXPECT_TRUE(f0.routes_agree(1e-12));
  EXPECT_NEAR(gi::functional_odd(j, ens, 0).value_direct, 2.0, 1e-14);
  const auto f2 = gi::functional_even(j, ens, 1);
  EXPECT_NEAR(f2.value_direct, 2 * beta * delta * std::tanh(x), 1e-13);
  EXPECT_TRUE(f2.routes_agree(1e-12));
  const auto f3 = gi::functional_odd(j, ens, 1);
  EXPECT_NEAR(f3.value_direct, 2 * std::pow(beta * delta, 2), 1e-13);
  EXPECT_TRUE(f3.routes_agree(1e-12));
}

TEST(Functionals, LowIndexIdentities) {
  // F_0 = (J;J), F_1 = <J J^dagger + J^dagger J>.
  std::mt19937_64 gen(12);
  const gi::Matrix h = oracle::random_hermitian(6, gen);
  const gi::Matrix j = oracle::random_general(6, gen);
  const auto ens = gi::decompose(gi::HermitianOperator(h), 0.7);
  const auto jb = gi::to_eigenbasis(j, ens);
  EXPECT_NEAR(gi::functional_direct(jb, ens, 0), gi::bd_inner(jb, jb, ens).real(), 1e-13);
  const double f1 = oracle::expect(j * j.adjoint() + j.adjoint() * j, h, 0.7).real();
  EXPECT_NEAR(gi::functional_direct(jb, ens, 1), f1, 1e-12 * f1);
}

TEST(Functionals, CommutingJVanishesAboveZero) {
  std::mt19937_64 gen(13);
  const gi::Matrix h = oracle::random_hermitian(5, gen);
  const auto ens = gi::decompose(gi::HermitianOperator(h), 1.0);
  const auto c = gi::to_eigenbasis(oracle::commuting_partner(h, gen), ens);
  const double scale = gi::functional_direct(c, ens, 1);
  for (int n = 1; n <= 3; ++n) {
    EXPECT_LE(gi::functional_even(c, ens, n).value_direct, 1e-20 * scale + 1e-20);
    EXPECT_LE(std::abs(gi::functional_odd(c, ens, n).value_direct), 1e-20 * scale + 1e-20);
  }
}

TEST(Functionals, RoutesAgreeOnRandomInstances) {
  std::mt19937_64 gen(14);
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = 3 + trial % 6;
    const gi::HermitianOperator h(oracle::random_hermitian(dim, gen));
    const bool hermitian = trial % 2 == 0;
    const gi::Matrix j = hermitian ? oracle::random_hermitian(dim, gen) : oracle::random_general(dim, gen);
    const auto ens = gi::decompose(h, 0.1 + 0.05 * trial);
    const auto jb = gi::to_eigenbasis(j, ens);
    for (int n = 0; n <= 4; ++n) {
      const auto fe = gi::functional_even(jb, ens, n);
      const auto fo = gi::functional_odd(jb, ens, n);
      EXPECT_GE(fe.value_direct, 0.0);
      EXPECT_GE(fo.value_direct, 0.0);
      EXPECT_TRUE(fe.routes_agree(1e-8)) << "F_" << fe.index() << " trial " << trial;
      EXPECT_TRUE(fo.routes_agree(1e-8)) << "F_" << fo.index() << " trial " << trial;
      if (n >= 1) {
        EXPECT_TRUE(fe.value_commutator.has_value());
      }
      EXPECT_TRUE(fe.value_rk.has_value());
    }
    // J has a nonzero diagonal in the eigenbasis, so the F_0 commutator route is skipped.
    EXPECT_FALSE(gi::functional_even(jb, ens, 0).value_commutator.has_value());
  }
}

TEST(Functionals, ZeroDiagonalEnablesF0Commutator) {
  std::mt19937_64 gen(15);
  const gi::HermitianOperator h(oracle::random_hermitian(6, gen));
  const auto ens = gi::decompose(h, 1.3);
  auto jb = gi::to_eigenbasis(oracle::random_general(6, gen), ens);
  jb.elements.diagonal().setZero();
  const auto f0 = gi::functional_even(jb, ens, 0);
  ASSERT_TRUE(f0.value_commutator.has_value());
  EXPECT_TRUE(f0.routes_agree(1e-10));
  EXPECT_GT(*f0.value_commutator, 0.0);
}

TEST(Functionals, CothIdentity) {
  // (1/2) F_1 - F_0 = Z^{-1} sum' |J_mn|^2 K_mn (X_mn coth X_mn - 1), naive loop.
  std::mt19937_64 gen(16);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 4 + trial % 4;
    const gi::Matrix h = oracle::random_hermitian(dim, gen);
    const gi::Matrix j = oracle::random_general(dim, gen);
    const double beta = 0.2 + 0.2 * trial;
    const auto ens = gi::decompose(gi::HermitianOperator(h), beta);
    const auto jb = gi::to_eigenbasis(j, ens);
    const double lhs = 0.5 * gi::functional_direct(jb, ens, 1) - gi::functional_direct(jb, ens, 0);

    const auto sp = oracle::spectrum(h);
    const oracle::Matrix je = sp.u.adjoint() * j * sp.u;
    const double e0 = sp.e[0];
    double z = 0.0, acc = 0.0;
    for (int n = 0; n < dim; ++n) z += std::exp(-beta * (sp.e[n] - e0));
    for (int m = 0; m < dim; ++m)
      for (int n = 0; n < dim; ++n) {
        if (m == n) continue;
        const double de = sp.e[m] - sp.e[n];
        const double k = (std::exp(-beta * (sp.e[n] - e0)) - std::exp(-beta * (sp.e[m] - e0))) / (beta * de);
        const double xx = 0.5 * beta * de;
        acc += std::norm(je(m, n)) * k * (xx / std::tanh(xx) - 1.0);
      }
    EXPECT_LE(oracle::rel(lhs, acc / z), 1e-10) << trial;
  }
}

TEST(Functionals, ParameterGuards) {
  const auto ens = gi::decompose(spin_t(1.0), 1.0);
  const auto j = gi::to_eigenbasis(sx(), ens);
  EXPECT_THROW(gi::functional_even(j, ens, 5), gi::ParameterError);
  EXPECT_THROW(gi::functional_odd(j, ens, -1), gi::ParameterError);
  EXPECT_THROW(gi::functional_direct(j, ens, 65), gi::ParameterError);
  const auto ens3 = gi::decompose(gi::HermitianOperator::identity(3), 1.0);
  EXPECT_THROW(gi::functional_even(j, ens3, 1), gi::DimensionError);
}

TEST(FreeEnergy, Examples) {
  EXPECT_NEAR(gi::free_energy(gi::HermitianOperator::zero(3), 2.0), -std::log(3.0) / 2.0, 1e-15);
  const double beta = 0.7, delta = 1.4, x = 0.5 * beta * delta;
  EXPECT_NEAR(gi::free_energy(spin_t(delta), beta), -std::log(2 * std::cosh(x)) / beta, 1e-15);
  std::mt19937_64 gen(17);
  const gi::HermitianOperator h(oracle::random_hermitian(6, gen));
  for (double c : {-50.0, 3.0, 1e3}) {
    const double shifted = gi::free_energy(h + c * gi::HermitianOperator::identity(6), 1.5);
    EXPECT_NEAR(shifted - gi::free_energy(h, 1.5), c, 1e-12 * std::max(1.0, std::abs(c)));
  }
  EXPECT_NEAR(gi::free_energy(h, 1.5), oracle::free_energy(h.matrix(), 1.5), 1e-12);
  // Large beta stays finite.
  EXPECT_TRUE(std::isfinite(gi::free_energy(h, 1e3)));
}

TEST(Susceptibility, Examples) {
  EXPECT_NEAR(gi::susceptibility_fd(spin_t(2.0), gi::HermitianOperator::identity(2), 1.0), 0.0, 1e-8);
  for (double beta : {0.5, 1.0, 3.0}) {
    const double x = beta;  // delta = 2
    const auto m = gi::single_spin(2.0);
    EXPECT_LE(oracle::rel(gi::susceptibility_fd(m.t, m.s, beta), beta * std::tanh(x) / x), 1e-7);
  }
}

TEST(Susceptibility, MatchesDuhamelFluctuationAndOracle) {
  std::mt19937_64 gen(18);
  for (int trial = 0; trial < 30; ++trial) {
    const gi::Matrix tm = oracle::random_hermitian(6, gen);
    const gi::Matrix sm = oracle::random_hermitian(6, gen);
    const gi::HermitianOperator t(tm), s(sm);
    const double beta = 0.3 + 0.1 * trial;
    const auto ens = gi::decompose(t, beta);
    const double ref = beta * gi::fluctuation(gi::to_eigenbasis(s, ens), ens).duhamel;
    EXPECT_LE(oracle::rel(gi::susceptibility_fd(t, s, beta), ref), 1e-5) << trial;
    if (trial < 5) {
      EXPECT_LE(oracle::rel(oracle::susceptibility(tm, sm, beta, 1e-2), ref), 1e-5);
    }
  }
  EXPECT_THROW(gi::susceptibility_fd(spin_t(1), gi::HermitianOperator::identity(3), 1.0),
               gi::DimensionError);
  EXPECT_THROW(gi::susceptibility_fd(spin_t(1), spin_t(1), 1.0, -1.0), gi::ParameterError);
}
