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

// Bogoliubov-Duhamel (Kubo-Mori) inner product
//
//   (A;B) = Z^{-1} \int_0^1 dtau Tr[e^{-beta(1-tau)H} A^dagger e^{-beta tau H} B]
//
// by its spectral representation and by quadrature, plus the F_n functional
// family built on the same double sums, the nested-commutator tower
// R_k = [H, R_{k-1}], quadratic fluctuations and free-energy curvature.

#ifndef GIBBSINEQ_DUHAMEL_HPP
#define GIBBSINEQ_DUHAMEL_HPP

#include <cmath>
#include <optional>
#include <string>

#include "gibbsineq/quadrature.hpp"
#include "gibbsineq/spectral.hpp"

namespace gibbsineq {

/// Summand weight w(E_m, E_n, beta) of the generic spectral double sum.
///
/// The catalogue is closed: a base factor (duhamel kernel, symmetric sum of
/// Boltzmann factors, or their absolute difference) optionally multiplied by
/// (beta (E_m - E_n))^{2n} or |beta (E_m - E_n)|^s. Coincident eigenvalues use
/// the continuous limit of each factor.
class SpectralWeight {
 public:
  enum class Base { duhamel, symmetric_sum, abs_difference };
  enum class Power { none, even, absolute };

  static SpectralWeight duhamel() { return SpectralWeight(Base::duhamel); }
  static SpectralWeight symmetric_sum() { return SpectralWeight(Base::symmetric_sum); }
  static SpectralWeight abs_difference() { return SpectralWeight(Base::abs_difference); }

  /// Multiply by (beta (E_m - E_n))^{2n}.
  SpectralWeight with_even_power(int n) const {
    if (n < 0) throw ParameterError("SpectralWeight: even power must be >= 0");
    SpectralWeight w = *this;
    w.power_ = Power::even;
    w.exponent_ = 2.0 * n;
    return w;
  }

  /// Multiply by |beta (E_m - E_n)|^s.
  SpectralWeight with_abs_power(double s) const {
    if (!(s >= 0.0) || !std::isfinite(s))
      throw ParameterError("SpectralWeight: power must be finite and >= 0");
    SpectralWeight w = *this;
    w.power_ = Power::absolute;
    w.exponent_ = s;
    return w;
  }

  Base base() const { return base_; }
  Power power() const { return power_; }
  double exponent() const { return exponent_; }

  std::string name() const {
    std::string s = base_ == Base::duhamel         ? "duhamel"
                    : base_ == Base::symmetric_sum ? "symmetric_sum"
                                                   : "abs_difference";
    if (power_ == Power::even) s += "*(beta dE)^" + std::to_string(exponent_);
    if (power_ == Power::absolute) s += "*|beta dE|^" + std::to_string(exponent_);
    return s;
  }

  /// Unnormalized weight.
  double operator()(double e_m, double e_n, double beta) const {
    const bool coincident = std::abs(e_m - e_n) <= degeneracy_threshold(e_m, e_n);
    double b = 0.0;
    switch (base_) {
      case Base::duhamel:
        b = duhamel_kernel(e_m, e_n, beta);
        break;
      case Base::symmetric_sum:
        b = std::exp(-beta * e_m) + std::exp(-beta * e_n);
        break;
      case Base::abs_difference:
        b = coincident ? 0.0
                       : -std::exp(-beta * std::min(e_m, e_n)) *
                             std::expm1(-beta * std::abs(e_m - e_n));
        break;
    }
    return b * power_factor(coincident ? 0.0 : beta * (e_m - e_n));
  }

  /// Z^{-1} w(E_m, E_n, beta) for eigenvalue indices of an ensemble.
  double normalized(const GibbsEnsemble& ens, Index m, Index n) const {
    const double em = ens.eigenvalues()[m];
    const double en = ens.eigenvalues()[n];
    const bool coincident = std::abs(em - en) <= degeneracy_threshold(em, en);
    double b = 0.0;
    switch (base_) {
      case Base::duhamel:
        b = ens.normalized_kernel(m, n);
        break;
      case Base::symmetric_sum:
        b = ens.weights()[m] + ens.weights()[n];
        break;
      case Base::abs_difference:
        b = ens.normalized_abs_difference(m, n);
        break;
    }
    if (b == 0.0) return 0.0;
    return b * power_factor(coincident ? 0.0 : ens.beta() * (em - en));
  }

 private:
  explicit SpectralWeight(Base b) : base_(b) {}

  double power_factor(double x) const {
    switch (power_) {
      case Power::none:
        return 1.0;
      case Power::even:
        return std::pow(x, exponent_);
      case Power::absolute:
        return std::pow(std::abs(x), exponent_);
    }
    return 1.0;
  }

  Base base_;
  Power power_ = Power::none;
  double exponent_ = 0.0;
};

/// Z^{-1} sum_{m,l} |J_{ml}|^2 w(E_m, E_l, beta).
inline double spectral_sum(const ObservableInBasis& j, const GibbsEnsemble& ens,
                           const SpectralWeight& w) {
  if (j.dim() != ens.dim()) throw DimensionError("spectral_sum: dimension mismatch");
  CompensatedSum<double> acc;
  for (Index l = 0; l < ens.dim(); ++l) {
    for (Index m = 0; m < ens.dim(); ++m) {
      const double a2 = std::norm(j(m, l));
      if (a2 == 0.0) continue;
      acc.add(a2 * w.normalized(ens, m, l));
    }
  }
  return acc.value();
}

/// Spectral representation of (A;B): off-diagonal pairs through the duhamel
/// kernel, diagonal and coincident pairs through its limit exp(-beta E).
inline Complex bd_inner(const ObservableInBasis& a, const ObservableInBasis& b,
                        const GibbsEnsemble& ens) {
  if (a.dim() != ens.dim() || b.dim() != ens.dim())
    throw DimensionError("bd_inner: dimension mismatch");
  CompensatedSum<Complex> acc;
  for (Index n = 0; n < ens.dim(); ++n)
    for (Index m = 0; m < ens.dim(); ++m)
      acc.add(std::conj(a(m, n)) * b(m, n) * ens.normalized_kernel(m, n));
  return acc.value();
}

/// Sum_{ij} X_{ij} Y_{ji} = Tr(XY).
inline Complex trace_product(const Matrix& x, const Matrix& y) {
  CompensatedSum<Complex> acc;
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j) acc.add(x(i, j) * y(j, i));
  return acc.value();
}

inline constexpr int kDefaultQuadratureNodes = 64;

/// (A;B) from its integral definition by Gauss-Legendre quadrature on [0,1].
/// A and B are given in the original basis; the imaginary-time propagators
/// are built from the eigendecomposition of H with the minimum eigenvalue
/// factored out of both the trace and Z.
inline Complex bd_inner_quadrature(const Matrix& a, const Matrix& b, const HermitianOperator& h,
                                   double beta, int nodes = kDefaultQuadratureNodes) {
  if (nodes < 8) throw ParameterError("bd_inner_quadrature: need at least 8 nodes");
  if (a.rows() != h.dim() || a.cols() != h.dim() || b.rows() != h.dim() || b.cols() != h.dim())
    throw DimensionError("bd_inner_quadrature: dimension mismatch");
  const GibbsEnsemble ens = decompose(h, beta);
  const Matrix& u = ens.eigenvectors();
  const RealVector shifted = ens.eigenvalues().array() - ens.min_eigenvalue();
  auto propagator = [&](double t) -> Matrix {
    RealVector d = (-beta * t * shifted.array()).exp();
    return u * d.cast<Complex>().asDiagonal() * u.adjoint();
  };
  const Matrix a_dag = a.adjoint();
  const QuadratureRule rule = gauss_legendre(nodes, 0.0, 1.0);
  CompensatedSum<Complex> acc;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double tau = rule.nodes[i];
    const Matrix left = propagator(1.0 - tau) * a_dag;
    const Matrix right = propagator(tau) * b;
    acc.add(rule.weights[i] * trace_product(left, right));
  }
  return acc.value() / std::exp(ens.log_z_shifted());
}

struct Fluctuation {
  double raw = 0.0;          ///< <dA^dagger dA>
  double symmetrized = 0.0;  ///< (1/2)<dA dA^dagger + dA^dagger dA>
  double duhamel = 0.0;      ///< (dA; dA)
};

/// Quadratic fluctuations of A about its Gibbs mean, dA = A - <A>.
inline Fluctuation fluctuation(const ObservableInBasis& a, const GibbsEnsemble& ens) {
  if (a.dim() != ens.dim()) throw DimensionError("fluctuation: dimension mismatch");
  const Complex mean = expectation(a, ens);
  ObservableInBasis da = a;
  da.elements.diagonal().array() -= mean;
  const Matrix dd = da.elements.adjoint() * da.elements;
  const Matrix dd_rev = da.elements * da.elements.adjoint();
  Fluctuation f;
  f.raw = expectation(dd, ens).real();
  f.symmetrized = 0.5 * (f.raw + expectation(dd_rev, ens).real());
  f.duhamel = bd_inner(da, da, ens).real();
  return f;
}

inline constexpr int kMaxCommutatorDepth = 8;

/// R_k with R_0 = J and R_k = [H, R_{k-1}], by dense matrix products.
inline Matrix commutator_chain(const Matrix& j, const HermitianOperator& h, int k) {
  if (k < 0 || k > kMaxCommutatorDepth)
    throw ParameterError("commutator_chain: depth must lie in [0, 8]");
  if (j.rows() != h.dim() || j.cols() != h.dim())
    throw DimensionError("commutator_chain: dimension mismatch");
  Matrix r = j;
  for (int i = 0; i < k; ++i) r = h.matrix() * r - r * h.matrix();
  return r;
}

/// X with [H, X] = J in the ensemble eigenbasis, so X_{mn} = J_{mn}/(E_m - E_n)
/// and X_{nn} = 0. This is the R_{-1} that extends the commutator tower
/// downwards (R_0 = [H, R_{-1}]).
inline ObservableInBasis solve_adjoint(const ObservableInBasis& j, const GibbsEnsemble& ens) {
  if (j.dim() != ens.dim()) throw DimensionError("solve_adjoint: dimension mismatch");
  const double atol = 1e-12 * std::max(1.0, max_abs(j.elements));
  const RealVector& e = ens.eigenvalues();
  const Index d = ens.dim();
  ObservableInBasis x{Matrix::Zero(d, d)};
  for (Index n = 0; n < d; ++n) {
    if (std::abs(j(n, n)) > atol)
      throw UnsolvableError("solve_adjoint: J has a nonzero diagonal element in the eigenbasis");
  }
  for (Index n = 0; n < d; ++n) {
    for (Index m = 0; m < d; ++m) {
      if (m == n) continue;
      const double gap = e[m] - e[n];
      if (std::abs(gap) <= degeneracy_threshold(e[m], e[n])) {
        if (std::abs(j(m, n)) > atol)
          throw UnsolvableError("solve_adjoint: J couples a degenerate pair");
        continue;
      }
      x.elements(m, n) = j(m, n) / gap;
    }
  }
  const Matrix diag_e = e.cast<Complex>().asDiagonal();
  const Matrix residual = diag_e * x.elements - x.elements * diag_e - j.elements;
  if (max_abs(residual) > 1e-10 * std::max(1.0, max_abs(j.elements)))
    throw NumericError("solve_adjoint: reconstruction [H, X] = J failed");
  return x;
}

enum class Parity { even, odd };

/// One F-functional evaluated by every applicable route.
struct FunctionalValue {
  int n = 0;  ///< F_{2n} (even) or F_{2n+1} (odd)
  Parity parity = Parity::even;
  double value_direct = 0.0;
  std::optional<double> value_commutator;  ///< nullopt when the route is not applicable
  std::optional<double> value_rk;          ///< even parity only
  /// Imaginary part of the commutator expectation; zero in exact arithmetic.
  double commutator_imag = 0.0;

  int index() const { return parity == Parity::even ? 2 * n : 2 * n + 1; }

  bool routes_agree(double rtol) const {
    auto close = [&](double v) {
      return std::abs(v - value_direct) <=
             rtol * std::max({std::abs(v), std::abs(value_direct), 1e-300});
    };
    if (value_commutator && !close(*value_commutator)) return false;
    if (value_rk && !close(*value_rk)) return false;
    return true;
  }
};

inline constexpr int kMaxFunctionalRoutesN = 4;
inline constexpr int kMaxFunctionalIndex = 64;

/// F_index(J;J) from its spectral double sum alone.
///   F_{2n}   = Z^{-1} sum |J_ml|^2 |e^{-bE_l} - e^{-bE_m}| (b|E_m - E_l|)^{2n-1}
///   F_{2n+1} = Z^{-1} sum |J_ml|^2 (e^{-bE_l} + e^{-bE_m}) (b(E_m - E_l))^{2n}
/// F_0 is the duhamel sum, i.e. (J;J).
inline double functional_direct(const ObservableInBasis& j, const GibbsEnsemble& ens, int index) {
  if (index < 0 || index > kMaxFunctionalIndex)
    throw ParameterError("functional_direct: index must lie in [0, 64]");
  if (index == 0) return spectral_sum(j, ens, SpectralWeight::duhamel());
  if (index % 2 == 0)
    return spectral_sum(j, ens, SpectralWeight::abs_difference().with_abs_power(index - 1));
  return spectral_sum(j, ens, SpectralWeight::symmetric_sum().with_even_power((index - 1) / 2));
}

namespace detail {

struct OriginalBasis {
  HermitianOperator h;
  Matrix j;
  Matrix rho;
};

inline OriginalBasis original_basis(const ObservableInBasis& j, const GibbsEnsemble& ens) {
  Matrix h = ens.reconstruct();
  h = 0.5 * (h + h.adjoint());
  return {HermitianOperator(h), from_eigenbasis(j, ens), ens.density_matrix()};
}

}  // namespace detail

/// F_{2n}(J;J): direct spectral sum, beta^{2n} (R_n;R_n), and the commutator
/// form beta^{2n-1} <R_n^dagger R_{n-1} - R_{n-1} R_n^dagger>. The commutator
/// routes run on dense matrices in the original basis. For n = 0 the
/// commutator form needs R_{-1} from solve_adjoint and is omitted when that
/// operator does not exist.
inline FunctionalValue functional_even(const ObservableInBasis& j, const GibbsEnsemble& ens,
                                       int n) {
  if (n < 0 || n > kMaxFunctionalRoutesN)
    throw ParameterError("functional_even: n must lie in [0, 4]");
  if (j.dim() != ens.dim()) throw DimensionError("functional_even: dimension mismatch");
  const double beta = ens.beta();
  FunctionalValue fv;
  fv.n = n;
  fv.parity = Parity::even;
  fv.value_direct = functional_direct(j, ens, 2 * n);

  const auto ob = detail::original_basis(j, ens);
  const Matrix rn = commutator_chain(ob.j, ob.h, n);
  const ObservableInBasis rn_eig = to_eigenbasis(rn, ens);
  fv.value_rk = std::pow(beta, 2 * n) * bd_inner(rn_eig, rn_eig, ens).real();

  if (n >= 1) {
    const Matrix rn1 = commutator_chain(ob.j, ob.h, n - 1);
    const Matrix c = rn.adjoint() * rn1 - rn1 * rn.adjoint();
    const Complex ev = trace_product(ob.rho, c) * std::pow(beta, 2 * n - 1);
    fv.value_commutator = ev.real();
    fv.commutator_imag = ev.imag();
  } else {
    try {
      const ObservableInBasis x = solve_adjoint(j, ens);
      const Matrix jd = j.elements.adjoint();
      const Matrix c = jd * x.elements - x.elements * jd;
      const Complex ev = expectation(c, ens) / beta;
      fv.value_commutator = ev.real();
      fv.commutator_imag = ev.imag();
    } catch (const UnsolvableError&) {
      fv.value_commutator.reset();
    }
  }
  return fv;
}

/// F_{2n+1}(J;J): direct spectral sum and beta^{2n} <R_n R_n^dagger + R_n^dagger R_n>.
inline FunctionalValue functional_odd(const ObservableInBasis& j, const GibbsEnsemble& ens,
                                      int n) {
  if (n < 0 || n > kMaxFunctionalRoutesN)
    throw ParameterError("functional_odd: n must lie in [0, 4]");
  if (j.dim() != ens.dim()) throw DimensionError("functional_odd: dimension mismatch");
  const double beta = ens.beta();
  FunctionalValue fv;
  fv.n = n;
  fv.parity = Parity::odd;
  fv.value_direct = functional_direct(j, ens, 2 * n + 1);

  const auto ob = detail::original_basis(j, ens);
  const Matrix rn = commutator_chain(ob.j, ob.h, n);
  const Matrix c = rn * rn.adjoint() + rn.adjoint() * rn;
  const Complex ev = trace_product(ob.rho, c) * std::pow(beta, 2 * n);
  fv.value_commutator = ev.real();
  fv.commutator_imag = ev.imag();
  return fv;
}

/// f = -(1/beta) ln Z, assembled from the min-shifted partition function.
inline double free_energy(const GibbsEnsemble& ens) {
  return ens.min_eigenvalue() - ens.log_z_shifted() / ens.beta();
}

inline double free_energy(const HermitianOperator& h, double beta) {
  return free_energy(decompose(h, beta));
}

inline double default_susceptibility_step(const HermitianOperator& s, double beta) {
  return 3e-2 / (1.0 + beta * s.spectral_norm());
}

/// -d^2 f / dh^2 at h = 0 for H(h) = T - h S: central second difference with
/// one Richardson level over (step, step/2).
inline double susceptibility_fd(const HermitianOperator& t, const HermitianOperator& s,
                                double beta, std::optional<double> step = std::nullopt) {
  check_beta(beta);
  if (t.dim() != s.dim()) throw DimensionError("susceptibility_fd: dimension mismatch");
  const double h = step.value_or(default_susceptibility_step(s, beta));
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("susceptibility_fd: bad step");
  const double f0 = free_energy(t, beta);
  auto second_difference = [&](double dh) {
    const double fp = free_energy(t - dh * s, beta);
    const double fm = free_energy(t + dh * s, beta);
    return -((fp - f0) + (fm - f0)) / (dh * dh);
  };
  const double d1 = second_difference(h);
  const double d2 = second_difference(0.5 * h);
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace gibbsineq

#endif  // GIBBSINEQ_DUHAMEL_HPP
