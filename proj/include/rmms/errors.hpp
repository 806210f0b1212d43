// Copyright 2026 The Authors.
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

#ifndef RMMS_ERRORS_HPP
#define RMMS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rmms {

/// Input that violates a data-model invariant (bad JSON, non-monotone table,
/// overlapping bundles, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A bundle names an item outside [0, m).
class MalformedBundle : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// An exact solver was asked to work beyond its enumeration cap.
class CapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A caller-side precondition does not hold (e.g. completing a non-EFL
/// partial allocation).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An existence guarantee failed to materialize. Always a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace rmms

#endif  // RMMS_ERRORS_HPP
