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

// Uhlmann fidelity between Gibbs states of H(h) = T - h S and the fidelity
// susceptibility chi_F: the spectral representation in two algebraic forms,
// one-sided and symmetric two-sided finite-difference oracles, the
// second-order expansion of F(rho(x-y), rho(x+y)) in y, and the upper/lower
// bounds in terms of (dS;dS) and <[[S,T],S]>.

#ifndef GIBBSINEQ_FIDELITY_HPP
#define GIBBSINEQ_FIDELITY_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gibbsineq/duhamel.hpp"
#include "gibbsineq/spectral.hpp"

namespace gibbsineq {

/// Hermitian, unit-trace, positive semidefinite up to 1e-12.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() < 1 || entries_.rows() != entries_.cols())
      throw NotAStateError("DensityMatrix: matrix must be square");
    if (!all_finite(entries_)) throw NotAStateError("DensityMatrix: non-finite entry");
    if (max_abs(entries_ - entries_.adjoint()) > 1e-12)
      throw NotAStateError("DensityMatrix: not Hermitian");
    if (std::abs(entries_.trace() - Complex(1.0)) > 1e-12)
      throw NotAStateError("DensityMatrix: trace is not one");
    Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12)
      throw NotAStateError("DensityMatrix: negative eigenvalue");
  }

  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }

 private:
  Matrix entries_;
};

/// Principal square root of a Hermitian PSD matrix. Eigenvalues in
/// [-1e-8, 0) are clamped to zero; anything more negative is rejected.
inline Matrix psd_sqrt(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("psd_sqrt: matrix must be square");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw NumericError("psd_sqrt: eigensolver failed");
  RealVector ev = es.eigenvalues();
  if (ev.size() > 0 && ev.minCoeff() < -1e-8)
    throw NotAStateError("psd_sqrt: matrix has a negative eigenvalue");
  ev = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

inline Matrix psd_sqrt(const DensityMatrix& rho) { return psd_sqrt(rho.matrix()); }

/// F = Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)) given both square roots, evaluated
/// as the trace norm of sqrt(rho1) sqrt(rho2). The singular values carry
/// absolute error ~eps, where a second PSD square root would turn eps-level
/// eigenvalue noise into sqrt(eps)-level trace error.
inline double fidelity_from_sqrts(const Matrix& sqrt_rho1, const Matrix& sqrt_rho2) {
  if (sqrt_rho1.rows() != sqrt_rho2.rows() || sqrt_rho1.cols() != sqrt_rho2.cols())
    throw DimensionError("uhlmann_fidelity: dimension mismatch");
  const Matrix prod = sqrt_rho1 * sqrt_rho2;
  Eigen::JacobiSVD<Matrix> svd(prod);
  const RealVector sv = svd.singularValues();
  CompensatedSum<double> acc;
  for (Index i = 0; i < sv.size(); ++i) acc.add(sv[i]);
  return acc.value();
}

inline double uhlmann_fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim()) throw DimensionError("uhlmann_fidelity: dimension mismatch");
  return fidelity_from_sqrts(psd_sqrt(rho1), psd_sqrt(rho2));
}

/// H(h) = T - h S.
inline HermitianOperator perturbed_hamiltonian(const HermitianOperator& t,
                                               const HermitianOperator& s, double h) {
  if (t.dim() != s.dim()) throw DimensionError("perturbed_hamiltonian: dimension mismatch");
  return t - h * s;
}

/// rho(h) = exp(-beta T + beta h S) / Z(h).
inline DensityMatrix gibbs_state(const HermitianOperator& t, const HermitianOperator& s, double h,
                                 double beta) {
  const GibbsEnsemble ens = decompose(perturbed_hamiltonian(t, s, h), beta);
  Matrix rho = ens.density_matrix();
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix(std::move(rho));
}

/// sqrt(rho(h)) straight from the spectrum of H(h): U diag(sqrt(rho_n)) U^dagger.
inline Matrix gibbs_state_sqrt(const HermitianOperator& t, const HermitianOperator& s, double h,
                               double beta) {
  const GibbsEnsemble ens = decompose(perturbed_hamiltonian(t, s, h), beta);
  const RealVector r = ens.weights().cwiseSqrt();
  return ens.eigenvectors() * r.cast<Complex>().asDiagonal() * ens.eigenvectors().adjoint();
}

/// F(rho(h1), rho(h2)) for the Gibbs family.
inline double gibbs_fidelity(const HermitianOperator& t, const HermitianOperator& s, double beta,
                             double h1, double h2) {
  return fidelity_from_sqrts(gibbs_state_sqrt(t, s, h1, beta), gibbs_state_sqrt(t, s, h2, beta));
}

/// d rho / dx at x, expressed in the eigenbasis of H(x).
struct RhoPrime {
  GibbsEnsemble ensemble;
  ObservableInBasis s;  ///< S in the same eigenbasis
  Matrix elements;      ///< <m|rho'|n>

  Matrix in_original_basis() const {
    return from_eigenbasis(ObservableInBasis{elements}, ensemble);
  }
};

/// <m|rho'|n> = beta S_mn K_mn - beta rho_n <S> delta_mn, with K the
/// normalized duhamel kernel. Off the diagonal this is
/// S_mn (rho_n - rho_m)/(E_m - E_n); coincident pairs take the limit beta rho S_mn.
inline RhoPrime rho_prime(const HermitianOperator& t, const HermitianOperator& s, double beta,
                          double x = 0.0) {
  GibbsEnsemble ens = decompose(perturbed_hamiltonian(t, s, x), beta);
  ObservableInBasis s_eig = to_eigenbasis(s, ens);
  const double mean_s = expectation(s_eig, ens).real();
  const Index d = ens.dim();
  Matrix rp(d, d);
  for (Index n = 0; n < d; ++n)
    for (Index m = 0; m < d; ++m) rp(m, n) = beta * s_eig(m, n) * ens.normalized_kernel(m, n);
  for (Index n = 0; n < d; ++n) rp(n, n) -= beta * ens.weights()[n] * mean_s;
  return {std::move(ens), std::move(s_eig), std::move(rp)};
}

struct SpectralSusceptibility {
  double x = 0.0;
  double form1 = 0.0;      ///< (1/2) sum |rho'_mn|^2 / (rho_m + rho_n)
  double form2 = 0.0;      ///< quantum + classical
  double quantum = 0.0;    ///< off-diagonal, x coth x suppressed part
  double classical = 0.0;  ///< (beta^2/4) <(dS^d)^2>
  /// Some rho_n < 1e-300; form1 has lost terms and form2 is authoritative.
  bool low_temperature = false;
  /// Coincident eigenvalues were resolved by their X -> 0 limit.
  bool degenerate_limit_applied = false;
};

inline constexpr double kLowTemperatureWeight = 1e-300;

/// chi_F at x from the spectrum of H(x), by both forms of the spectral
/// representation.
///   form1 = (1/2) sum_{m,n} |<m|rho'|n>|^2 / (rho_m + rho_n)
///   form2 = (beta^2/8) sum_{m!=n} [(rho_n - rho_m)/X_mn] |S_nm|^2 / (X_mn coth X_mn)
///         + (beta^2/4) <(dS^d)^2>,   X_mn = beta (E_m - E_n)/2
/// (rho_n - rho_m)/X_mn is 2 K_mn with K the normalized duhamel kernel, which
/// keeps form2 free of cancellation at any temperature.
inline SpectralSusceptibility chi_f_spectral(const HermitianOperator& t,
                                             const HermitianOperator& s, double beta,
                                             double x = 0.0) {
  const RhoPrime rp = rho_prime(t, s, beta, x);
  const GibbsEnsemble& ens = rp.ensemble;
  const RealVector& rho = ens.weights();
  const RealVector& e = ens.eigenvalues();
  const Index d = ens.dim();
  SpectralSusceptibility out;
  out.x = x;
  out.low_temperature = rho.minCoeff() < kLowTemperatureWeight;
  out.degenerate_limit_applied = has_degenerate_pair(ens);

  CompensatedSum<double> f1;
  for (Index n = 0; n < d; ++n) {
    for (Index m = 0; m < d; ++m) {
      const double denom = rho[m] + rho[n];
      if (denom == 0.0) continue;
      f1.add(std::norm(rp.elements(m, n)) / denom);
    }
  }
  out.form1 = 0.5 * f1.value();

  CompensatedSum<double> q;
  for (Index n = 0; n < d; ++n) {
    for (Index m = 0; m < d; ++m) {
      if (m == n) continue;
      const double xmn = 0.5 * beta * (e[m] - e[n]);
      const bool coincident = std::abs(e[m] - e[n]) <= degeneracy_threshold(e[m], e[n]);
      const double xc = coincident ? 1.0 : xcothx(xmn);
      q.add(ens.normalized_kernel(m, n) * std::norm(rp.s(n, m)) / xc);
    }
  }
  out.quantum = 0.25 * beta * beta * q.value();

  const double mean_s = expectation(rp.s, ens).real();
  CompensatedSum<double> var;
  for (Index n = 0; n < d; ++n) {
    const double dsn = rp.s(n, n).real() - mean_s;
    var.add(rho[n] * dsn * dsn);
  }
  out.classical = 0.25 * beta * beta * var.value();
  out.form2 = out.quantum + out.classical;
  return out;
}

inline double default_fidelity_step(const HermitianOperator& s, double beta) {
  return 1e-3 / (1.0 + beta * s.spectral_norm());
}

namespace detail {

inline double log_fidelity_quotient(double f, double h) {
  if (!std::isfinite(f) || f <= 0.0)
    throw ConditioningError("fidelity underflow: cannot form -2 ln F / h^2");
  return -2.0 * std::log(f) / (h * h);
}

}  // namespace detail

/// chi_F = lim -2 ln F(rho(x), rho(x+h)) / h^2. The quotient carries an O(h)
/// term, removed by one Richardson step 2 D(h/2) - D(h).
inline double chi_f_fd_one_sided(const HermitianOperator& t, const HermitianOperator& s,
                                 double beta, std::optional<double> h = std::nullopt,
                                 double x = 0.0) {
  check_beta(beta);
  const double step = h.value_or(default_fidelity_step(s, beta));
  if (!(step > 0.0) || !std::isfinite(step)) throw ParameterError("chi_f_fd_one_sided: bad step");
  const Matrix base = gibbs_state_sqrt(t, s, x, beta);
  auto quotient = [&](double dh) {
    const double f = fidelity_from_sqrts(base, gibbs_state_sqrt(t, s, x + dh, beta));
    return detail::log_fidelity_quotient(f, dh);
  };
  return 2.0 * quotient(0.5 * step) - quotient(step);
}

/// chi_F^(2) = lim -2 ln F(rho(x - h/2), rho(x + h/2)) / h^2. The quotient is
/// even in h, so one Richardson step (4 D(h/2) - D(h))/3 removes the h^2 term.
inline double chi_f_fd_two_sided(const HermitianOperator& t, const HermitianOperator& s,
                                 double beta, std::optional<double> h = std::nullopt,
                                 double x = 0.0) {
  check_beta(beta);
  const double step = h.value_or(default_fidelity_step(s, beta));
  if (!(step > 0.0) || !std::isfinite(step)) throw ParameterError("chi_f_fd_two_sided: bad step");
  auto quotient = [&](double dh) {
    return detail::log_fidelity_quotient(gibbs_fidelity(t, s, beta, x - 0.5 * dh, x + 0.5 * dh),
                                         dh);
  };
  return (4.0 * quotient(0.5 * step) - quotient(step)) / 3.0;
}

struct ExpansionCheck {
  double x = 0.0;
  double y = 0.0;
  double trace_x = 0.0;            ///< Tr X, first-order term of the square root
  double trace_y = 0.0;            ///< Tr Y = -y^2 sum |rho'_nm|^2 / (rho_m + rho_n)
  double trace_y_assembled = 0.0;  ///< Tr Y from the diagonal second-order balance
  double fidelity_direct = 1.0;    ///< F(rho(x-y), rho(x+y))
  double fidelity_expansion = 1.0; ///< 1 + Tr Y
  double residual = 0.0;           ///< |F_direct - F_expansion| at y
  double residual_half = 0.0;      ///< same at y/2
  /// p in residual ~ y^p from (y, y/2); +inf when the residual at y is at
  /// rounding level.
  double residual_order = std::numeric_limits<double>::infinity();
};

inline double default_expansion_y(const HermitianOperator& s, double beta) {
  return 1e-2 / (1.0 + beta * s.spectral_norm());
}

/// Second-order expansion of sqrt(sqrt(rho(x-y)) rho(x+y) sqrt(rho(x-y))) =
/// rho + X + Y + O(y^3) in the eigenbasis of H(x), with
///   sqrt(rho(x+-y)) = sqrt(rho) +- A + B + O(y^3),
///   A_mn = y rho'_mn / (sqrt(rho_m) + sqrt(rho_n)),
///   B_mn = [-(A^2)_mn + (y^2/2) rho''_mn] / (sqrt(rho_m) + sqrt(rho_n)),
///   X_mn = -y rho'_mn (sqrt(rho_m) - sqrt(rho_n))^2 / (rho_m + rho_n).
/// Y_nn follows from the diagonal of the O(y^2) balance
///   (X^2)_nn + 2 rho_n Y_nn = (A rho A)_nn - y sqrt(rho_n)(A rho' + rho' A)_nn
///                             + (y^2/2) rho_n rho''_nn + 2 rho_n^{3/2} B_nn,
/// with rho'' from a central difference of rho'.
inline ExpansionCheck expansion_check(const HermitianOperator& t, const HermitianOperator& s,
                                      double beta, double x,
                                      std::optional<double> y_opt = std::nullopt) {
  check_beta(beta);
  const double y = y_opt.value_or(default_expansion_y(s, beta));
  if (!(y >= 0.0) || !std::isfinite(y)) throw ParameterError("expansion_check: y must be >= 0");
  ExpansionCheck out;
  out.x = x;
  out.y = y;
  const RhoPrime rp = rho_prime(t, s, beta, x);
  const GibbsEnsemble& ens = rp.ensemble;
  const RealVector& rho = ens.weights();
  const RealVector sq = rho.cwiseSqrt();
  const Index d = ens.dim();
  const Matrix& r1 = rp.elements;

  const double delta = 1e-4 / (1.0 + beta * s.spectral_norm());
  const Matrix r2_orig = (rho_prime(t, s, beta, x + delta).in_original_basis() -
                          rho_prime(t, s, beta, x - delta).in_original_basis()) /
                         (2.0 * delta);
  const Matrix r2 = to_eigenbasis(r2_orig, ens).elements;

  Matrix a(d, d);
  Matrix xm(d, d);
  for (Index n = 0; n < d; ++n) {
    for (Index m = 0; m < d; ++m) {
      const double ssum = sq[m] + sq[n];
      a(m, n) = ssum > 0.0 ? y * r1(m, n) / ssum : Complex(0.0);
      const double rsum = rho[m] + rho[n];
      const double sdiff = sq[m] - sq[n];
      xm(m, n) = rsum > 0.0 ? -y * r1(m, n) * sdiff * sdiff / rsum : Complex(0.0);
    }
  }
  const Matrix a2 = a * a;
  Matrix b(d, d);
  for (Index n = 0; n < d; ++n) {
    for (Index m = 0; m < d; ++m) {
      const double ssum = sq[m] + sq[n];
      b(m, n) = ssum > 0.0 ? (-a2(m, n) + 0.5 * y * y * r2(m, n)) / ssum : Complex(0.0);
    }
  }

  CompensatedSum<double> tr_x;
  for (Index n = 0; n < d; ++n) tr_x.add(xm(n, n).real());
  out.trace_x = tr_x.value();

  CompensatedSum<double> tr_y;
  for (Index n = 0; n < d; ++n)
    for (Index m = 0; m < d; ++m) {
      const double rsum = rho[m] + rho[n];
      if (rsum > 0.0) tr_y.add(std::norm(r1(n, m)) / rsum);
    }
  out.trace_y = -y * y * tr_y.value();

  const Matrix rho_d = rho.cast<Complex>().asDiagonal();
  const Matrix arhoa = a * rho_d * a;
  const Matrix ar1 = a * r1 + r1 * a;
  const Matrix x2 = xm * xm;
  CompensatedSum<double> tr_y_asm;
  for (Index n = 0; n < d; ++n) {
    if (rho[n] == 0.0) continue;
    const Complex rhs = arhoa(n, n) - y * sq[n] * ar1(n, n) + 0.5 * y * y * rho[n] * r2(n, n) +
                        2.0 * rho[n] * sq[n] * b(n, n) - x2(n, n);
    tr_y_asm.add(rhs.real() / (2.0 * rho[n]));
  }
  out.trace_y_assembled = tr_y_asm.value();

  out.fidelity_expansion = 1.0 + out.trace_y;
  out.fidelity_direct = y == 0.0 ? 1.0 : gibbs_fidelity(t, s, beta, x - y, x + y);
  out.residual = std::abs(out.fidelity_direct - out.fidelity_expansion);
  if (y > 0.0) {
    const double yh = 0.5 * y;
    const double f_half = gibbs_fidelity(t, s, beta, x - yh, x + yh);
    out.residual_half = std::abs(f_half - (1.0 - yh * yh * tr_y.value()));
    constexpr double floor = 64 * std::numeric_limits<double>::epsilon();
    if (out.residual > floor) {
      out.residual_order = out.residual_half > 0.0
                               ? std::log(out.residual / out.residual_half) / std::log(2.0)
                               : std::numeric_limits<double>::infinity();
    }
  } else {
    out.residual_order = std::numeric_limits<double>::infinity();
  }
  return out;
}

struct FidelityBounds {
  double lower = 0.0;  ///< upper - (beta^3/48) <[[S,T],S]>_0
  double upper = 0.0;  ///< (beta^2/4) (dS;dS)_0
  double double_commutator = 0.0;  ///< <[[S,T],S]>_0
  double duhamel_fluctuation = 0.0;  ///< (dS;dS)_0
};

inline FidelityBounds chi_f_bounds(const HermitianOperator& t, const HermitianOperator& s,
                                   double beta) {
  if (t.dim() != s.dim()) throw DimensionError("chi_f_bounds: dimension mismatch");
  const GibbsEnsemble ens = decompose(t, beta);
  FidelityBounds b;
  b.duhamel_fluctuation = fluctuation(to_eigenbasis(s, ens), ens).duhamel;
  const Matrix& sm = s.matrix();
  const Matrix& tm = t.matrix();
  const Matrix st = sm * tm - tm * sm;
  const Matrix dc = st * sm - sm * st;
  b.double_commutator = trace_product(ens.density_matrix(), dc).real();
  b.upper = 0.25 * beta * beta * b.duhamel_fluctuation;
  b.lower = b.upper - beta * beta * beta / 48.0 * b.double_commutator;
  return b;
}

/// Every chi_F route plus the bounds at one inverse temperature (x = 0).
struct FidelityReport {
  double beta = 0.0;
  double chi_spectral_form1 = 0.0;
  double chi_spectral_form2 = 0.0;
  double chi_quantum_term = 0.0;
  double chi_classical_term = 0.0;
  double chi_fd_one_sided = 0.0;
  double chi_fd_two_sided = 0.0;
  double bound_lower = 0.0;
  double bound_upper = 0.0;
  /// -d^2 f/dh^2 by finite differences; bound_upper should equal beta/4 of it.
  double susceptibility_fd = 0.0;
  bool low_temperature = false;
  bool degenerate_limit_applied = false;
  std::vector<std::string> warnings;
};

inline FidelityReport fidelity_report(const HermitianOperator& t, const HermitianOperator& s,
                                      double beta) {
  FidelityReport r;
  r.beta = beta;
  const SpectralSusceptibility sp = chi_f_spectral(t, s, beta, 0.0);
  r.chi_spectral_form1 = sp.form1;
  r.chi_spectral_form2 = sp.form2;
  r.chi_quantum_term = sp.quantum;
  r.chi_classical_term = sp.classical;
  r.low_temperature = sp.low_temperature;
  r.degenerate_limit_applied = sp.degenerate_limit_applied;
  if (sp.low_temperature)
    r.warnings.emplace_back("low-temperature conditioning: form2 is authoritative");
  if (sp.degenerate_limit_applied) r.warnings.emplace_back("degenerate-limit applied");
  const FidelityBounds b = chi_f_bounds(t, s, beta);
  r.bound_lower = b.lower;
  r.bound_upper = b.upper;
  try {
    r.chi_fd_one_sided = chi_f_fd_one_sided(t, s, beta);
    r.chi_fd_two_sided = chi_f_fd_two_sided(t, s, beta);
  } catch (const ConditioningError& e) {
    r.chi_fd_one_sided = std::numeric_limits<double>::quiet_NaN();
    r.chi_fd_two_sided = std::numeric_limits<double>::quiet_NaN();
    r.warnings.emplace_back(e.what());
  }
  r.susceptibility_fd = susceptibility_fd(t, s, beta);
  return r;
}

}  // namespace gibbsineq

#endif  // GIBBSINEQ_FIDELITY_HPP
