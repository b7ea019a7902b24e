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

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spinshape/controllers.hpp"
#include "spinshape/dephasing.hpp"
#include "spinshape/network.hpp"
#include "spinshape/robustness.hpp"

namespace spinshape {

using Json = nlohmann::json;

// {type: "ring"|"chain"|"edges", n, J: number | [[m, n, J], ...], kappa}
Json network_to_json(const SpinNetwork& net);
SpinNetwork network_from_json(const Json& doc);

// A ranked controller set as persisted by the design command.
struct ControllerSet {
  SpinNetwork net;
  TransferSpec transfer;                // nominal transfer; T is the fixed time if not optimized
  std::optional<TimeRange> time_range;  // set when readout times were optimized
  std::vector<Controller> controllers;  // rank order
};

Json controller_set_to_json(const ControllerSet& set);
ControllerSet controller_set_from_json(const Json& doc);

// {dim, seed, count, acceptance_rate, candidates_drawn, processes: [{rates: [...]}]}
Json ensemble_to_json(const Ensemble& ensemble);
Ensemble ensemble_from_json(const Json& doc);

Json aggregates_to_json(const Aggregates& a);
Json report_to_json(const RobustnessReport& report);

// Shortest decimal string that reads back to the same double.
std::string format_double(double value);

}  // namespace spinshape
