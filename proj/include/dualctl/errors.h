// Copyright 2026 The dualctl Authors
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

#ifndef DUALCTL_ERRORS_H_
#define DUALCTL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dualctl {

// Numerical breakdown (non-finite input, SVD failure).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The gain level is below the feasibility threshold.
class InfeasibleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A closed-form result was requested outside the setting it is valid for.
class UnsupportedConfiguration : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A supremum over the adversary's move is +infinity.
class UnboundedMaximization : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace dualctl

#endif  // DUALCTL_ERRORS_H_
