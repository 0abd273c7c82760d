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

#ifndef GIBBSINEQ_SPECTRAL_HPP
#define GIBBSINEQ_SPECTRAL_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "gibbsineq/errors.hpp"

namespace gibbsineq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative threshold below which two eigenvalues are treated as coincident.
inline constexpr double kDegeneracyRtol = 1e-12;

/// Relative Hermiticity tolerance for HermitianOperator.
inline constexpr double kHermiticityRtol = 1e-12;

/// Neumaier-compensated running sum. Spectral double sums go through this so
/// that reported digits do not depend on summation order beyond ~1e-15.
template <typename T>
class CompensatedSum {
 public:
  void add(T x) {
    T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{0};
  T comp_{0};
};

template <>
class CompensatedSum<Complex> {
 public:
  void add(Complex x) {
    re_.add(x.real());
    im_.add(x.imag());
  }
  Complex value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<double> re_;
  CompensatedSum<double> im_;
};

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
        return false;
  return true;
}

/// Dense complex square matrix validated to be Hermitian at construction.
class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() < 1 || entries_.rows() != entries_.cols())
      throw ValidationError("HermitianOperator: matrix must be square with dim >= 1");
    if (!all_finite(entries_))
      throw ValidationError("HermitianOperator: non-finite entry");
    const double scale = max_abs(entries_);
    const double asym = max_abs(entries_ - entries_.adjoint());
    if (asym > kHermiticityRtol * scale)
      throw ValidationError("HermitianOperator: matrix is not Hermitian (asymmetry " +
                            std::to_string(asym) + ")");
  }

  static HermitianOperator identity(Index dim) {
    return HermitianOperator(Matrix::Identity(dim, dim));
  }
  static HermitianOperator zero(Index dim) {
    return HermitianOperator(Matrix::Zero(dim, dim));
  }

  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }

  /// Largest absolute eigenvalue.
  double spectral_norm() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }

  HermitianOperator operator+(const HermitianOperator& o) const {
    check_same_dim(o);
    return HermitianOperator(entries_ + o.entries_);
  }
  HermitianOperator operator-(const HermitianOperator& o) const {
    check_same_dim(o);
    return HermitianOperator(entries_ - o.entries_);
  }
  HermitianOperator operator*(double c) const { return HermitianOperator(entries_ * c); }

 private:
  void check_same_dim(const HermitianOperator& o) const {
    if (o.dim() != dim()) throw DimensionError("HermitianOperator: dimension mismatch");
  }
  Matrix entries_;
};

inline HermitianOperator operator*(double c, const HermitianOperator& h) { return h * c; }

/// Normalized Boltzmann weights exp(-beta E_n) / Z, evaluated after shifting
/// the spectrum by its minimum so that no factor exceeds one.
inline RealVector gibbs_weights(const RealVector& eigenvalues, double beta) {
  if (eigenvalues.size() == 0) return {};
  if (!eigenvalues.allFinite() || !std::isfinite(beta))
    throw ValidationError("gibbs_weights: non-finite input");
  const double e_min = eigenvalues.minCoeff();
  RealVector w(eigenvalues.size());
  CompensatedSum<double> z;
  for (Index n = 0; n < w.size(); ++n) {
    w[n] = std::exp(-beta * (eigenvalues[n] - e_min));
    z.add(w[n]);
  }
  return w / z.value();
}

/// -expm1(-t)/t for t >= 0, with its limit 1 at t = 0.
inline double relative_decay(double t) {
  if (t == 0.0) return 1.0;
  return -std::expm1(-t) / t;
}

inline double degeneracy_threshold(double e_m, double e_n) {
  return kDegeneracyRtol * std::max({1.0, std::abs(e_m), std::abs(e_n)});
}

/// (exp(-beta e_m) - exp(-beta e_n)) / (beta (e_n - e_m)), unnormalized.
/// Symmetric in its energy arguments; equals exp(-beta e) at coincidence.
inline double duhamel_kernel(double e_m, double e_n, double beta) {
  const double lo = std::min(e_m, e_n);
  const double gap = std::abs(e_m - e_n);
  if (gap <= degeneracy_threshold(e_m, e_n)) return std::exp(-beta * lo);
  return std::exp(-beta * lo) * relative_decay(beta * gap);
}

/// x coth x, even, >= 1. Series branch near the origin.
inline double xcothx(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-4) {
    const double x2 = x * x;
    return 1.0 + x2 / 3.0 - x2 * x2 / 45.0;
  }
  return ax / std::tanh(ax);
}

/// Eigendecomposition of a Hamiltonian together with its Gibbs weights at a
/// fixed inverse temperature. Immutable once built; see decompose().
class GibbsEnsemble {
 public:
  GibbsEnsemble(RealVector eigenvalues, Matrix eigenvectors, double beta)
      : eigenvalues_(std::move(eigenvalues)),
        eigenvectors_(std::move(eigenvectors)),
        beta_(beta) {
    e_min_ = eigenvalues_.minCoeff();
    CompensatedSum<double> z;
    for (Index n = 0; n < eigenvalues_.size(); ++n)
      z.add(std::exp(-beta_ * (eigenvalues_[n] - e_min_)));
    log_z_shifted_ = std::log(z.value());
    weights_ = gibbs_weights(eigenvalues_, beta_);
  }

  Index dim() const { return eigenvalues_.size(); }
  double beta() const { return beta_; }
  const RealVector& eigenvalues() const { return eigenvalues_; }
  /// Columns are the eigenvectors |n>.
  const Matrix& eigenvectors() const { return eigenvectors_; }
  const RealVector& weights() const { return weights_; }
  double min_eigenvalue() const { return e_min_; }
  /// log sum_n exp(-beta (E_n - E_min)).
  double log_z_shifted() const { return log_z_shifted_; }
  /// log Z, assembled from the shifted form.
  double log_z() const { return log_z_shifted_ - beta_ * e_min_; }

  /// Z^{-1} times duhamel_kernel(E_m, E_n, beta), computed from the weights.
  double normalized_kernel(Index m, Index n) const {
    const double em = eigenvalues_[m];
    const double en = eigenvalues_[n];
    const double rho_lo = em <= en ? weights_[m] : weights_[n];
    const double gap = std::abs(em - en);
    if (gap <= degeneracy_threshold(em, en)) return rho_lo;
    return rho_lo * relative_decay(beta_ * gap);
  }

  /// Z^{-1} |exp(-beta E_m) - exp(-beta E_n)|.
  double normalized_abs_difference(Index m, Index n) const {
    const double em = eigenvalues_[m];
    const double en = eigenvalues_[n];
    const double gap = std::abs(em - en);
    if (gap <= degeneracy_threshold(em, en)) return 0.0;
    const double rho_lo = em <= en ? weights_[m] : weights_[n];
    return -rho_lo * std::expm1(-beta_ * gap);
  }

  /// U diag(E) U^dagger.
  Matrix reconstruct() const {
    return eigenvectors_ * eigenvalues_.cast<Complex>().asDiagonal() * eigenvectors_.adjoint();
  }

  /// Gibbs density matrix in the original basis.
  Matrix density_matrix() const {
    return eigenvectors_ * weights_.cast<Complex>().asDiagonal() * eigenvectors_.adjoint();
  }

 private:
  RealVector eigenvalues_;
  Matrix eigenvectors_;
  double beta_;
  RealVector weights_;
  double e_min_ = 0.0;
  double log_z_shifted_ = 0.0;
};

inline void check_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw ValidationError("beta must be positive and finite");
}

/// Diagonalize H and attach Gibbs weights at inverse temperature beta.
inline GibbsEnsemble decompose(const HermitianOperator& h, double beta) {
  check_beta(beta);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  if (es.info() != Eigen::Success) throw NumericError("decompose: eigensolver did not converge");
  RealVector evals = es.eigenvalues();
  Matrix evecs = es.eigenvectors();
  // Eigen already returns ascending order; the stable sort makes the contract
  // independent of that.
  std::vector<Index> order(static_cast<std::size_t>(evals.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return evals[a] < evals[b]; });
  RealVector sorted(evals.size());
  Matrix sorted_vecs(evecs.rows(), evecs.cols());
  for (Index i = 0; i < evals.size(); ++i) {
    sorted[i] = evals[order[static_cast<std::size_t>(i)]];
    sorted_vecs.col(i) = evecs.col(order[static_cast<std::size_t>(i)]);
  }
  return GibbsEnsemble(std::move(sorted), std::move(sorted_vecs), beta);
}

/// Matrix elements <m|A|n> of an observable in an ensemble eigenbasis.
struct ObservableInBasis {
  Matrix elements;

  Index dim() const { return elements.rows(); }
  const Complex& operator()(Index m, Index n) const { return elements(m, n); }
};

inline ObservableInBasis to_eigenbasis(const Matrix& a, const GibbsEnsemble& ens) {
  if (a.rows() != ens.dim() || a.cols() != ens.dim())
    throw DimensionError("to_eigenbasis: observable dimension does not match ensemble");
  const Matrix& u = ens.eigenvectors();
  return {u.adjoint() * a * u};
}

inline ObservableInBasis to_eigenbasis(const HermitianOperator& a, const GibbsEnsemble& ens) {
  return to_eigenbasis(a.matrix(), ens);
}

/// Inverse of to_eigenbasis.
inline Matrix from_eigenbasis(const ObservableInBasis& a, const GibbsEnsemble& ens) {
  const Matrix& u = ens.eigenvectors();
  return u * a.elements * u.adjoint();
}

/// <A> = Tr(rho A), evaluated on the eigenbasis diagonal.
inline Complex expectation(const ObservableInBasis& a, const GibbsEnsemble& ens) {
  if (a.dim() != ens.dim()) throw DimensionError("expectation: dimension mismatch");
  CompensatedSum<Complex> acc;
  for (Index n = 0; n < ens.dim(); ++n) acc.add(ens.weights()[n] * a(n, n));
  return acc.value();
}

inline Complex expectation(const Matrix& a_in_eigenbasis, const GibbsEnsemble& ens) {
  return expectation(ObservableInBasis{a_in_eigenbasis}, ens);
}

inline bool has_degenerate_pair(const GibbsEnsemble& ens) {
  const RealVector& e = ens.eigenvalues();
  for (Index n = 1; n < e.size(); ++n)
    if (std::abs(e[n] - e[n - 1]) <= degeneracy_threshold(e[n], e[n - 1])) return true;
  return false;
}

}  // namespace gibbsineq

#endif  // GIBBSINEQ_SPECTRAL_HPP
