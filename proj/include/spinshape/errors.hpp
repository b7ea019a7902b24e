// Copyright 2026 The Spinshape Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace spinshape {

// Invalid input data: malformed networks, out-of-range nodes, dimension
// mismatches between files.
class DataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Reduced dynamics are only defined for XX coupling (kappa == 0).
class UnsupportedCouplingError : public DataError {
 public:
  using DataError::DataError;
};

// Numerical failures: degenerate spectra where a simple one is required,
// exhausted sampling budgets, vanishing denominators.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegeneracyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SamplingBudgetError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace spinshape
