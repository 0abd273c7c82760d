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

// Spin-1/2 in a field, T = (delta/2) sz, perturbed by S = sx: the Harris
// chain and every fidelity-susceptibility route at a few temperatures.

#include <cstdio>

#include "gibbsineq/gibbsineq.hpp"

int main() {
  using namespace gibbsineq;
  const ModelPair m = single_spin(2.0);
  for (double beta : {0.5, 1.0, 2.0}) {
    const GibbsEnsemble ens = decompose(m.t, beta);
    const InequalityReport h = check_harris(to_eigenbasis(m.s, ens), ens);
    const FidelityReport f = fidelity_report(m.t, m.s, beta);
    std::printf("beta=%.2f  harris %.6f <= %.6f <= %.6f  %s\n", beta, h.lhs, *h.mid, h.rhs,
                h.pass ? "ok" : "FAIL");
    std::printf("           chi_F spectral %.9f  fd1 %.9f  fd2 %.9f\n", f.chi_spectral_form2,
                f.chi_fd_one_sided, f.chi_fd_two_sided);
    std::printf("           bounds [%.9f, %.9f]\n", f.bound_lower, f.bound_upper);
  }
}
