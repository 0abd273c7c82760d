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

#ifndef GIBBSINEQ_GIBBSINEQ_HPP
#define GIBBSINEQ_GIBBSINEQ_HPP

#include "gibbsineq/duhamel.hpp"
#include "gibbsineq/errors.hpp"
#include "gibbsineq/fidelity.hpp"
#include "gibbsineq/inequalities.hpp"
#include "gibbsineq/models.hpp"
#include "gibbsineq/quadrature.hpp"
#include "gibbsineq/random.hpp"
#include "gibbsineq/report.hpp"
#include "gibbsineq/spectral.hpp"
#include "gibbsineq/suite.hpp"

#endif  // GIBBSINEQ_GIBBSINEQ_HPP
