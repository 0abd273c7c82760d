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

// Two- and three-part bounds on quadratic fluctuations in terms of (J;J).
//
// The classical members (Harris, Ginibre, Bogoliubov Jr., Plechko,
// Bogoliubov Jr.-Plechko-Repnikov) are evaluated from operator expressions:
// Gibbs averages of commutators and the duhamel inner product of R_k. The
// generalized members are evaluated from the F_n spectral sums. The two
// evaluations coincide at (n = 0, k = 1), which the test suite exploits.

#ifndef GIBBSINEQ_INEQUALITIES_HPP
#define GIBBSINEQ_INEQUALITIES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "gibbsineq/duhamel.hpp"
#include "gibbsineq/spectral.hpp"

namespace gibbsineq {

enum class InequalityFamily {
  harris,
  ginibre,
  bogoliubov_jr,
  plechko,
  bpr,
  gen_harris,
  gen_plechko,
  gen_ginibre,
  gen_bpr,
};

inline constexpr std::array<InequalityFamily, 9> kAllInequalityFamilies = {
    InequalityFamily::harris,     InequalityFamily::ginibre,     InequalityFamily::bogoliubov_jr,
    InequalityFamily::plechko,    InequalityFamily::bpr,         InequalityFamily::gen_harris,
    InequalityFamily::gen_plechko, InequalityFamily::gen_ginibre, InequalityFamily::gen_bpr,
};

inline std::string to_string(InequalityFamily f) {
  switch (f) {
    case InequalityFamily::harris:
      return "harris";
    case InequalityFamily::ginibre:
      return "ginibre";
    case InequalityFamily::bogoliubov_jr:
      return "bogoliubov_jr";
    case InequalityFamily::plechko:
      return "plechko";
    case InequalityFamily::bpr:
      return "bpr";
    case InequalityFamily::gen_harris:
      return "gen_harris";
    case InequalityFamily::gen_plechko:
      return "gen_plechko";
    case InequalityFamily::gen_ginibre:
      return "gen_ginibre";
    case InequalityFamily::gen_bpr:
      return "gen_bpr";
  }
  return "?";
}

inline InequalityFamily parse_inequality_family(const std::string& name) {
  for (InequalityFamily f : kAllInequalityFamilies)
    if (to_string(f) == name) return f;
  throw ParameterError("unknown inequality family '" + name + "'");
}

inline constexpr double kDefaultInequalityTol = 1e-10;
inline constexpr int kMaxInequalityN = 3;
inline constexpr int kMaxInequalityK = 3;

struct InequalityParams {
  std::optional<int> n;
  std::optional<int> k;
  std::optional<double> p;
  std::optional<double> q;
  double beta = 0.0;
};

/// lhs <= mid <= rhs, or lhs <= rhs when there is no middle term.
struct InequalityReport {
  InequalityFamily family = InequalityFamily::harris;
  InequalityParams params;
  double lhs = 0.0;
  std::optional<double> mid;
  double rhs = 0.0;
  double slack_left = 0.0;   ///< mid - lhs; zero for two-part inequalities
  double slack_right = 0.0;  ///< rhs - mid, or rhs - lhs
  bool pass = false;
  double tol = kDefaultInequalityTol;

  double scale() const { return std::max({1.0, std::abs(lhs), std::abs(rhs)}); }
  /// Smallest slack over scale; pass <=> this is >= -tol.
  double relative_slack() const {
    return (mid ? std::min(slack_left, slack_right) : slack_right) / scale();
  }
};

inline InequalityReport make_inequality_report(InequalityFamily family, InequalityParams params,
                                               double lhs, std::optional<double> mid, double rhs,
                                               double tol) {
  InequalityReport r;
  r.family = family;
  r.params = params;
  r.lhs = lhs;
  r.mid = mid;
  r.rhs = rhs;
  r.tol = tol;
  if (mid) {
    r.slack_left = *mid - lhs;
    r.slack_right = rhs - *mid;
  } else {
    r.slack_left = 0.0;
    r.slack_right = rhs - lhs;
  }
  const double s = r.scale();
  r.pass = std::isfinite(lhs) && std::isfinite(rhs) && (!mid || std::isfinite(*mid)) &&
           r.slack_left >= -tol * s && r.slack_right >= -tol * s;
  return r;
}

namespace detail {

inline void check_n(int n) {
  if (n < 0 || n > kMaxInequalityN) throw ParameterError("inequality: n must lie in [0, 3]");
}

inline void check_k(int k) {
  if (k < 1 || k > kMaxInequalityK) throw ParameterError("inequality: k must lie in [1, 3]");
}

/// Operator-side quantities of the classical inequalities, all computed from
/// dense products in the eigenbasis where H = diag(E).
struct OperatorForms {
  Matrix h;
  Matrix j;
  Matrix jd;
  const GibbsEnsemble* ens;

  OperatorForms(const ObservableInBasis& jj, const GibbsEnsemble& e)
      : h(e.eigenvalues().cast<Complex>().asDiagonal()), j(jj.elements), jd(jj.elements.adjoint()),
        ens(&e) {}

  double duhamel() const { return bd_inner({j}, {j}, *ens).real(); }
  /// (1/2) <J J^dagger + J^dagger J>
  double symmetrized() const { return 0.5 * expectation(Matrix(j * jd + jd * j), *ens).real(); }
  /// <[[J^dagger, H], J]>
  double double_commutator() const {
    const Matrix c1 = jd * h - h * jd;
    return expectation(Matrix(c1 * j - j * c1), *ens).real();
  }
  /// <[J^dagger, H][H, J] + [H, J][J^dagger, H]>
  double commutator_square() const {
    const Matrix a = jd * h - h * jd;
    const Matrix b = h * j - j * h;
    return expectation(Matrix(a * b + b * a), *ens).real();
  }
  Matrix r(int k) const { return commutator_chain(j, HermitianOperator(h), k); }
};

}  // namespace detail

/// (J;J) <= (1/2)<JJ^+ + J^+J> <= (J;J) + (beta/12) <[[J^+, H], J]>.
inline InequalityReport check_harris(const ObservableInBasis& j, const GibbsEnsemble& ens,
                                     double tol = kDefaultInequalityTol) {
  const detail::OperatorForms op(j, ens);
  const double beta = ens.beta();
  const double dj = op.duhamel();
  return make_inequality_report(InequalityFamily::harris, {0, 1, {}, {}, beta}, dj,
                                op.symmetrized(), dj + beta / 12.0 * op.double_commutator(), tol);
}

/// (J;J) <= (1/2)<JJ^+ + J^+J> <= (J;J) + (1/2) {(J;J) beta <[[J^+, H], J]>}^{1/2}.
inline InequalityReport check_ginibre(const ObservableInBasis& j, const GibbsEnsemble& ens,
                                      double tol = kDefaultInequalityTol) {
  const detail::OperatorForms op(j, ens);
  const double beta = ens.beta();
  const double dj = op.duhamel();
  const double extra = 0.5 * std::sqrt(std::max(0.0, dj * beta * op.double_commutator()));
  return make_inequality_report(InequalityFamily::ginibre, {0, 1, {}, {}, beta}, dj,
                                op.symmetrized(), dj + extra, tol);
}

/// (1/2)<JJ^+ + J^+J> <= (J;J) + (1/2)[(J;J) beta]^{2/3}
///                                 {<[J^+,H][H,J] + [H,J][J^+,H]>}^{1/3}.
inline InequalityReport check_bogoliubov_jr(const ObservableInBasis& j, const GibbsEnsemble& ens,
                                            double tol = kDefaultInequalityTol) {
  const detail::OperatorForms op(j, ens);
  const double beta = ens.beta();
  const double dj = op.duhamel();
  const double extra = 0.5 * std::pow(std::max(0.0, dj * beta), 2.0 / 3.0) *
                       std::cbrt(std::max(0.0, op.commutator_square()));
  return make_inequality_report(InequalityFamily::bogoliubov_jr, {0, 1, {}, {}, beta},
                                op.symmetrized(), std::nullopt, dj + extra, tol);
}

/// (J;J) <= (1/2)<JJ^+ + J^+J> <= (J;J) + (1/2)(J;J)^{(2k-1)/2k} beta (R_k;R_k)^{1/2k}.
inline InequalityReport check_plechko(const ObservableInBasis& j, const GibbsEnsemble& ens, int k,
                                      double tol = kDefaultInequalityTol) {
  detail::check_k(k);
  const detail::OperatorForms op(j, ens);
  const double beta = ens.beta();
  const double dj = op.duhamel();
  const Matrix rk = op.r(k);
  const double rr = bd_inner({rk}, {rk}, ens).real();
  const double kk = 2.0 * k;
  const double extra = 0.5 * std::pow(std::max(0.0, dj), (kk - 1.0) / kk) * beta *
                       std::pow(std::max(0.0, rr), 1.0 / kk);
  return make_inequality_report(InequalityFamily::plechko, {0, k, {}, {}, beta}, dj,
                                op.symmetrized(), dj + extra, tol);
}

/// (1/2)<JJ^+ + J^+J> <= (J;J) + (1/2)(J;J)^{2k/(2k+1)} {beta^{2k} <R_k R_k^+ + R_k^+ R_k>}^{1/(2k+1)}.
inline InequalityReport check_bpr(const ObservableInBasis& j, const GibbsEnsemble& ens, int k,
                                  double tol = kDefaultInequalityTol) {
  detail::check_k(k);
  const detail::OperatorForms op(j, ens);
  const double beta = ens.beta();
  const double dj = op.duhamel();
  const Matrix rk = op.r(k);
  const Matrix rkd = rk.adjoint();
  const double avg = expectation(Matrix(rk * rkd + rkd * rk), ens).real();
  const double kk = 2.0 * k;
  const double extra = 0.5 * std::pow(std::max(0.0, dj), kk / (kk + 1.0)) *
                       std::pow(std::max(0.0, std::pow(beta, kk) * avg), 1.0 / (kk + 1.0));
  return make_inequality_report(InequalityFamily::bpr, {0, k, {}, {}, beta}, op.symmetrized(),
                                std::nullopt, dj + extra, tol);
}

/// F_{2n} <= (1/2) F_{2n+1} <= F_{2n} + (1/12) F_{2n+2}.
inline InequalityReport check_harris_gen(const ObservableInBasis& j, const GibbsEnsemble& ens,
                                         int n, double tol = kDefaultInequalityTol) {
  detail::check_n(n);
  const double f2n = functional_direct(j, ens, 2 * n);
  const double f2n1 = functional_direct(j, ens, 2 * n + 1);
  const double f2n2 = functional_direct(j, ens, 2 * n + 2);
  return make_inequality_report(InequalityFamily::gen_harris, {n, {}, {}, {}, ens.beta()}, f2n,
                                0.5 * f2n1, f2n + f2n2 / 12.0, tol);
}

/// Hoelder form: with 1/p + 1/q = 1,
///   (2Z)^{-1} sum |J_ml|^2 |e^{-bE_l} - e^{-bE_m}| [b(E_m - E_l)]^{2n}
///     <= (1/2)(J;J)^{1/p} {Z^{-1} sum |J_ml|^2 K_ml [b|E_m - E_l|]^{(2n+1)q}}^{1/q}.
inline InequalityReport check_plechko_gen(const ObservableInBasis& j, const GibbsEnsemble& ens,
                                          int n, double p, double tol = kDefaultInequalityTol) {
  detail::check_n(n);
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("check_plechko_gen: p must exceed 1");
  const double q = p / (p - 1.0);
  const double lhs =
      0.5 * spectral_sum(j, ens, SpectralWeight::abs_difference().with_even_power(n));
  const double dj = spectral_sum(j, ens, SpectralWeight::duhamel());
  const double moment =
      spectral_sum(j, ens, SpectralWeight::duhamel().with_abs_power((2.0 * n + 1.0) * q));
  const double rhs = 0.5 * std::pow(dj, 1.0 / p) * std::pow(moment, 1.0 / q);
  return make_inequality_report(InequalityFamily::gen_plechko, {n, {}, p, q, ens.beta()}, lhs,
                                std::nullopt, rhs, tol);
}

/// F_{2n} <= (1/2) F_{2n+1} <= F_{2n} + (1/2)(J;J)^{(2k-1)/2k} [F_{2k(2n+1)}]^{1/2k}.
inline InequalityReport check_ginibre_gen(const ObservableInBasis& j, const GibbsEnsemble& ens,
                                          int n, int k, double tol = kDefaultInequalityTol) {
  detail::check_n(n);
  detail::check_k(k);
  const double f2n = functional_direct(j, ens, 2 * n);
  const double f2n1 = functional_direct(j, ens, 2 * n + 1);
  const double dj = n == 0 ? f2n : functional_direct(j, ens, 0);
  const double fk = functional_direct(j, ens, 2 * k * (2 * n + 1));
  const double kk = 2.0 * k;
  const double rhs = f2n + 0.5 * std::pow(dj, (kk - 1.0) / kk) * std::pow(fk, 1.0 / kk);
  return make_inequality_report(InequalityFamily::gen_ginibre, {n, k, {}, {}, ens.beta()}, f2n,
                                0.5 * f2n1, rhs, tol);
}

/// (1/2) F_{2n+1} <= F_{2n} + (1/2)(J;J)^{2k/(2k+1)} [F_{2(2nk+n+k)+1}]^{1/(2k+1)}.
inline InequalityReport check_bpr_gen(const ObservableInBasis& j, const GibbsEnsemble& ens, int n,
                                      int k, double tol = kDefaultInequalityTol) {
  detail::check_n(n);
  detail::check_k(k);
  const double f2n = functional_direct(j, ens, 2 * n);
  const double f2n1 = functional_direct(j, ens, 2 * n + 1);
  const double dj = n == 0 ? f2n : functional_direct(j, ens, 0);
  const double fk = functional_direct(j, ens, 2 * (2 * n * k + n + k) + 1);
  const double kk = 2.0 * k;
  const double rhs = f2n + 0.5 * std::pow(dj, kk / (kk + 1.0)) * std::pow(fk, 1.0 / (kk + 1.0));
  return make_inequality_report(InequalityFamily::gen_bpr, {n, k, {}, {}, ens.beta()}, 0.5 * f2n1,
                                std::nullopt, rhs, tol);
}

}  // namespace gibbsineq

#endif  // GIBBSINEQ_INEQUALITIES_HPP
