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

#ifndef GIBBSINEQ_ERRORS_HPP
#define GIBBSINEQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gibbsineq {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input failed a structural check (non-Hermitian, non-finite, bad beta).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Operand dimensions disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A parameter is outside the supported range (n, k, p, size caps).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Eigensolver failure or a non-finite intermediate.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// The operator equation J = [H, X] has no solution for the given J.
class UnsolvableError : public Error {
 public:
  using Error::Error;
};

/// A matrix offered as a density matrix is not a state.
class NotAStateError : public Error {
 public:
  using Error::Error;
};

/// Finite-difference evaluation lost all significant digits.
class ConditioningError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace gibbsineq

#endif  // GIBBSINEQ_ERRORS_HPP
