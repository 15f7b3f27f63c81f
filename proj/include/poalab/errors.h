// Copyright 2026 The poa-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POALAB_ERRORS_H_
#define POALAB_ERRORS_H_

#include <stdexcept>
#include <string>

namespace poalab {

// Malformed or out-of-range arguments (dimension mismatch, fraction outside
// [0,1], increasing marginals, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of a special function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A bound was queried outside the regime in which it holds.
class InapplicableBound : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A payment rule charged a negative amount.
class NptViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation was refused because it exceeds a configured size limit.
class ResourceGuard : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Solver failure that should not happen on well-formed input.
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace poalab

#endif  // POALAB_ERRORS_H_
