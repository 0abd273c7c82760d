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

// Open transverse-field Ising chain: fidelity susceptibility against its
// lower and upper bounds across a temperature sweep.

#include <cstdio>

#include "gibbsineq/gibbsineq.hpp"

int main() {
  using namespace gibbsineq;
  const ModelPair m = ising_chain(6, 1.0, 1.0);
  std::printf("%8s %14s %14s %14s %14s\n", "beta", "lower", "chi_F", "upper", "quantum");
  for (double beta : {0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    const SpectralSusceptibility chi = chi_f_spectral(m.t, m.s, beta, 0.0);
    const FidelityBounds b = chi_f_bounds(m.t, m.s, beta);
    std::printf("%8.3f %14.8g %14.8g %14.8g %14.8g\n", beta, b.lower, chi.form2, b.upper,
                chi.quantum);
  }
}
