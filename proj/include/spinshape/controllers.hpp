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

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "spinshape/dynamics.hpp"
#include "spinshape/network.hpp"

namespace spinshape {

struct ControllerProvenance {
  std::uint64_t seed = 0;
  int restart_index = 0;
  int iterations = 0;
};

// Static bias field tuned for one transfer. transfer.read_time is the
// controller's own readout time (it differs per controller when the time is
// optimized).
struct Controller {
  BiasField bias;
  TransferSpec transfer;
  double nominal_fidelity = 0.0;
  ControllerProvenance provenance;
  // Set on later entries of a ranked set whose bias repeats an earlier one.
  bool duplicate = false;
};

// Coherent transfer error 1 - p (instantaneous or window readout).
double objective(const SpinNetwork& net, const BiasField& bias, const TransferSpec& transfer);

// Gradient of the instantaneous-readout error with respect to the biases,
// followed by d/dT when with_time is set. Needs a non-degenerate spectrum.
Eigen::VectorXd objective_gradient(const SpinNetwork& net, const BiasField& bias,
                                   const TransferSpec& transfer, bool with_time = false);

// Fidelity recomputed from (net, bias, transfer).
double controller_fidelity(const SpinNetwork& net, const Controller& controller);

struct TimeRange {
  double lo = 1.0;
  double hi = 30.0;
};

struct OptimizeOptions {
  int restarts = 1;
  int max_iterations = 1000;
  double bias_lower = -100.0;
  double bias_upper = 100.0;
  std::uint64_t seed = 0;
  // When set, the readout time is optimized jointly within the range.
  std::optional<TimeRange> time_range;
  // Starting point of restart 0 instead of a random draw.
  std::optional<BiasField> initial_bias;
  double gradient_step = 1e-6;
  // Use objective_gradient instead of central differences where it applies
  // (instantaneous readout, simple spectrum).
  bool analytic_gradient = false;
  double gradient_tolerance = 1e-9;
  int jobs = 1;
  // Receives every accepted optimizer iterate (bias, readout time, error).
  // Must be thread-safe when jobs > 1.
  std::function<void(const BiasField&, double, double)> on_iterate;
};

// Best of `restarts` box-constrained quasi-Newton runs from uniform random
// starts. The stored bias is gauge-fixed to mean zero.
Controller optimize_controller(const SpinNetwork& net, const TransferSpec& transfer,
                               const OptimizeOptions& options);

// `count` independent optimize_controller runs with seeds derived from
// options.seed, ranked by descending nominal fidelity (ties by run index).
std::vector<Controller> generate_controller_set(const SpinNetwork& net,
                                                const TransferSpec& transfer, int count,
                                                const OptimizeOptions& options);

}  // namespace spinshape
