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

#ifndef GIBBSINEQ_RANDOM_HPP
#define GIBBSINEQ_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

#include "gibbsineq/spectral.hpp"

namespace gibbsineq {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based generator: draw i of stream (seed, stream) is a pure
/// function of (seed, stream, i). Normals come from Box-Muller rather than
/// std::normal_distribution, whose output is implementation-defined.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

  /// Independent generator for instance `index` of a campaign.
  CounterRng split(std::uint64_t index) const {
    CounterRng r(0);
    r.key_ = splitmix64(key_ ^ splitmix64(index ^ 0xd1b54a32d192ed03ULL));
    return r;
  }

  std::uint64_t next_u64() { return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * counter_++); }

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Standard complex normal, E|z|^2 = 1.
  Complex complex_normal() { return Complex(normal(), normal()) * std::numbers::sqrt2 * 0.5; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Dense matrix of i.i.d. standard complex normals.
inline Matrix random_complex_matrix(Index dim, CounterRng& rng) {
  Matrix g(dim, dim);
  for (Index j = 0; j < dim; ++j)
    for (Index i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
  return g;
}

/// (G + G^dagger)/2 with G i.i.d. standard complex normal.
inline Matrix random_hermitian_matrix(Index dim, CounterRng& rng) {
  const Matrix g = random_complex_matrix(dim, rng);
  return 0.5 * (g + g.adjoint());
}

}  // namespace gibbsineq

#endif  // GIBBSINEQ_RANDOM_HPP
