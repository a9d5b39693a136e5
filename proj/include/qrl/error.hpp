// Copyright 2026 The QRL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Exception types shared by all modules.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace qrl {

/// Thrown when a caller violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a size guard (factorial enumeration, 2^n memory) refuses work.
class CapacityExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A one-hot block whose relaxed probabilities are all zero.
class DegenerateBlock : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An ansatz context lacks data the requested variant needs.
class InvalidContext : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qrl
