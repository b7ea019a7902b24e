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

#include <Eigen/Dense>

#include <functional>

namespace spinshape {

struct BoxBounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Eigen::VectorXd project(const Eigen::VectorXd& x) const {
    return x.cwiseMax(lower).cwiseMin(upper);
  }
};

struct LbfgsOptions {
  int memory = 8;
  int max_iterations = 1000;
  // Stop when the projected gradient infinity-norm drops below this.
  double gradient_tolerance = 1e-9;
  double armijo = 1e-4;
  int max_line_search = 50;
};

enum class LbfgsStatus { converged, max_iterations, line_search_failed };

struct LbfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  Eigen::VectorXd gradient;
  int iterations = 0;
  int evaluations = 0;
  LbfgsStatus status = LbfgsStatus::max_iterations;
};

using ValueFunction = std::function<double(const Eigen::VectorXd&)>;
using GradientFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
// Called with every accepted iterate, including the projected start point.
using IterateObserver = std::function<void(const Eigen::VectorXd&, double)>;

Eigen::VectorXd central_difference_gradient(const ValueFunction& f, const Eigen::VectorXd& x,
                                            double step);

// Limited-memory BFGS with projection onto a box. Variables pinned at an
// active bound are removed from the quasi-Newton step; an Armijo backtracking
// search runs along the projected path.
LbfgsResult minimize_box(const ValueFunction& f, const GradientFunction& gradient,
                         const Eigen::VectorXd& x0, const BoxBounds& box,
                         const LbfgsOptions& options = {},
                         const IterateObserver& observer = {});

}  // namespace spinshape
