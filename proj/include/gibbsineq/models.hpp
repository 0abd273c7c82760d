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

#ifndef GIBBSINEQ_MODELS_HPP
#define GIBBSINEQ_MODELS_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gibbsineq/random.hpp"
#include "gibbsineq/spectral.hpp"

namespace gibbsineq {

/// A Hamiltonian T and a perturbation S, H(h) = T - h S.
struct ModelPair {
  HermitianOperator t;
  HermitianOperator s;
  std::string convention;
};

enum class ModelKind { single_spin, ising_chain, dicke, random };

inline std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::single_spin:
      return "single-spin";
    case ModelKind::ising_chain:
      return "ising-chain";
    case ModelKind::dicke:
      return "dicke";
    case ModelKind::random:
      return "random";
  }
  return "?";
}

inline ModelKind parse_model_kind(const std::string& name) {
  if (name == "single-spin" || name == "single_spin") return ModelKind::single_spin;
  if (name == "ising-chain" || name == "ising_chain" || name == "ising") return ModelKind::ising_chain;
  if (name == "dicke") return ModelKind::dicke;
  if (name == "random") return ModelKind::random;
  throw ParameterError("unknown model '" + name + "'");
}

/// Single spin-1/2 in a longitudinal field with a transverse perturbation:
/// T = (delta/2) sigma_z, S = sigma_x.
inline ModelPair single_spin(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw ParameterError("single_spin: delta must be positive");
  Matrix t = Matrix::Zero(2, 2);
  t(0, 0) = 0.5 * delta;
  t(1, 1) = -0.5 * delta;
  Matrix s = Matrix::Zero(2, 2);
  s(0, 1) = 1.0;
  s(1, 0) = 1.0;
  return {HermitianOperator(t), HermitianOperator(s), "T=(delta/2)sz, S=sx"};
}

namespace detail {

// Qubit i is bit i of the basis index; sigma_z|0> = +|0>.
inline double sz(std::uint64_t state, int site) { return (state >> site) & 1U ? -1.0 : 1.0; }

}  // namespace detail

inline constexpr int kMaxIsingSites = 10;

/// Open transverse-field Ising chain
/// T = -coupling sum_i sz_i sz_{i+1} - field sum_i sx_i, S = (1/N) sum_i sx_i.
inline ModelPair ising_chain(int n_sites, double coupling, double field) {
  if (n_sites < 2 || n_sites > kMaxIsingSites)
    throw ParameterError("ising_chain: n_sites must lie in [2, 10]");
  const Index dim = Index{1} << n_sites;
  Matrix t = Matrix::Zero(dim, dim);
  Matrix s = Matrix::Zero(dim, dim);
  for (Index b = 0; b < dim; ++b) {
    const auto state = static_cast<std::uint64_t>(b);
    double diag = 0.0;
    for (int i = 0; i + 1 < n_sites; ++i) diag -= coupling * detail::sz(state, i) * detail::sz(state, i + 1);
    t(b, b) = diag;
    for (int i = 0; i < n_sites; ++i) {
      const auto flipped = static_cast<Index>(state ^ (std::uint64_t{1} << i));
      t(flipped, b) += -field;
      s(flipped, b) += 1.0 / n_sites;
    }
  }
  return {HermitianOperator(t), HermitianOperator(s),
          "open chain; T=-J sum sz sz - g sum sx; S=(1/N) sum sx"};
}

inline constexpr int kMaxDickeBosons = 30;
inline constexpr int kMaxDickeSpins = 4;

/// Single-mode Dicke model with hard boson cutoff n_max:
/// T = omega a^dagger a + (omega0/2) sum_i sz_i,
/// S = (lambda/sqrt(N)) (a + a^dagger) sum_i sx_i.
/// Basis index = boson_number * 2^N + spin bits.
inline ModelPair dicke_truncated(int n_max, int n_spins, double omega, double omega0,
                                 double lambda) {
  if (n_max < 1 || n_max > kMaxDickeBosons)
    throw ParameterError("dicke_truncated: n_max must lie in [1, 30]");
  if (n_spins < 1 || n_spins > kMaxDickeSpins)
    throw ParameterError("dicke_truncated: n_spins must lie in [1, 4]");
  const Index spin_dim = Index{1} << n_spins;
  const Index dim = (n_max + 1) * spin_dim;
  Matrix t = Matrix::Zero(dim, dim);
  Matrix s = Matrix::Zero(dim, dim);
  const double g = lambda / std::sqrt(static_cast<double>(n_spins));
  for (Index nb = 0; nb <= n_max; ++nb) {
    for (Index sp = 0; sp < spin_dim; ++sp) {
      const Index b = nb * spin_dim + sp;
      const auto state = static_cast<std::uint64_t>(sp);
      double zsum = 0.0;
      for (int i = 0; i < n_spins; ++i) zsum += detail::sz(state, i);
      t(b, b) = omega * static_cast<double>(nb) + 0.5 * omega0 * zsum;
      // a^dagger: |nb> -> sqrt(nb+1)|nb+1>; the a term is its transpose.
      if (nb < n_max) {
        const double amp = g * std::sqrt(static_cast<double>(nb + 1));
        for (int i = 0; i < n_spins; ++i) {
          const auto sp2 = static_cast<Index>(state ^ (std::uint64_t{1} << i));
          const Index b2 = (nb + 1) * spin_dim + sp2;
          s(b2, b) += amp;
          s(b, b2) += amp;
        }
      }
    }
  }
  return {HermitianOperator(t), HermitianOperator(s),
          "T=omega a+a + (omega0/2) sum sz; S=(lambda/sqrt(N))(a+a+) sum sx; cutoff n_max"};
}

inline constexpr int kMaxRandomDim = 64;

/// Independent Hermitian draws T (stream 0) and S (stream 1) for a seed.
inline ModelPair random_pair(int dim, std::uint64_t seed) {
  if (dim < 2 || dim > kMaxRandomDim) throw ParameterError("random_pair: dim must lie in [2, 64]");
  CounterRng rt(seed, 0);
  CounterRng rs(seed, 1);
  Matrix t = random_hermitian_matrix(dim, rt);
  Matrix s = random_hermitian_matrix(dim, rs);
  return {HermitianOperator(std::move(t)), HermitianOperator(std::move(s)),
          "T,S=(G+G^dagger)/2, G standard complex normal"};
}

/// General (non-Hermitian) complex observable for a seed (stream 2).
inline Matrix random_observable(int dim, std::uint64_t seed) {
  if (dim < 2 || dim > kMaxRandomDim)
    throw ParameterError("random_observable: dim must lie in [2, 64]");
  CounterRng r(seed, 2);
  return random_complex_matrix(dim, r);
}

/// Seed of instance `index` in a campaign seeded by `seed`.
inline std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 0x2545f4914f6cdd1dULL));
}

/// Named model with its parameters.
struct ModelSpec {
  ModelKind kind = ModelKind::single_spin;
  std::map<std::string, double> params;

  double param(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  }

  Index dim() const {
    switch (kind) {
      case ModelKind::single_spin:
        return 2;
      case ModelKind::ising_chain:
        return Index{1} << static_cast<int>(param("sites", 4));
      case ModelKind::dicke:
        return (static_cast<Index>(param("nmax", 4)) + 1) *
               (Index{1} << static_cast<int>(param("spins", 1)));
      case ModelKind::random:
        return static_cast<Index>(param("dim", 8));
    }
    return 0;
  }

  /// Random models draw a fresh pair per seed; the others ignore it.
  ModelPair build(std::uint64_t seed = 0) const {
    switch (kind) {
      case ModelKind::single_spin:
        return single_spin(param("delta", 2.0));
      case ModelKind::ising_chain:
        return ising_chain(static_cast<int>(param("sites", 4)), param("coupling", 1.0),
                           param("field", 1.0));
      case ModelKind::dicke:
        return dicke_truncated(static_cast<int>(param("nmax", 4)),
                               static_cast<int>(param("spins", 1)), param("omega", 1.0),
                               param("omega0", 1.0), param("lambda", 0.5));
      case ModelKind::random:
        return random_pair(static_cast<int>(param("dim", 8)), seed);
    }
    throw ParameterError("ModelSpec: unknown model");
  }

  bool is_random() const { return kind == ModelKind::random; }
};

/// Catalogue entry for `models` listings.
struct ModelInfo {
  std::string name;
  std::string description;
  std::vector<std::pair<std::string, double>> defaults;
};

inline std::vector<ModelInfo> model_catalogue() {
  return {
      {"single-spin", "T=(delta/2)sz, S=sx (dim 2)", {{"delta", 2.0}}},
      {"ising-chain", "open TFIM, S=(1/N) sum sx (dim 2^sites, sites<=10)",
       {{"sites", 4}, {"coupling", 1.0}, {"field", 1.0}}},
      {"dicke", "single-mode Dicke, boson cutoff nmax (dim (nmax+1) 2^spins)",
       {{"nmax", 4}, {"spins", 1}, {"omega", 1.0}, {"omega0", 1.0}, {"lambda", 0.5}}},
      {"random", "T,S independent (G+G^dagger)/2 draws (dim<=64)", {{"dim", 8}}},
  };
}

}  // namespace gibbsineq

#endif  // GIBBSINEQ_MODELS_HPP
