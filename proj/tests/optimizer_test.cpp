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

#include "spinshape/optimizer.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "spinshape/errors.hpp"

namespace spinshape {
namespace {

BoxBounds box(int n, double lo, double hi) {
  return {Eigen::VectorXd::Constant(n, lo), Eigen::VectorXd::Constant(n, hi)};
}

double rosenbrock(const Eigen::VectorXd& x) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    sum += 100.0 * std::pow(x(i + 1) - x(i) * x(i), 2) + std::pow(1.0 - x(i), 2);
  }
  return sum;
}

Eigen::VectorXd rosenbrock_gradient(const Eigen::VectorXd& x) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    const double r = x(i + 1) - x(i) * x(i);
    g(i) += -400.0 * x(i) * r - 2.0 * (1.0 - x(i));
    g(i + 1) += 200.0 * r;
  }
  return g;
}

TEST(CentralDifference, MatchesAnalyticGradient) {
  const Eigen::VectorXd x = (Eigen::VectorXd(4) << -1.2, 1.0, 0.3, -0.5).finished();
  const Eigen::VectorXd fd = central_difference_gradient(rosenbrock, x, 1e-6);
  EXPECT_LT((fd - rosenbrock_gradient(x)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(MinimizeBox, RosenbrockInteriorMinimum) {
  const Eigen::VectorXd x0 = (Eigen::VectorXd(4) << -1.2, 1.0, -1.2, 1.0).finished();
  const LbfgsResult r = minimize_box(rosenbrock, rosenbrock_gradient, x0, box(4, -5, 5));
  EXPECT_EQ(r.status, LbfgsStatus::converged);
  EXPECT_LT((r.x - Eigen::VectorXd::Ones(4)).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT(r.value, 1e-12);
}

TEST(MinimizeBox, ActiveBoundsAreRespected) {
  // Unconstrained minimum at (3, -2, 0.5); the box clips the first two.
  const Eigen::Vector3d target(3.0, -2.0, 0.5);
  auto f = [&](const Eigen::VectorXd& x) { return (x - target).squaredNorm(); };
  auto g = [&](const Eigen::VectorXd& x) { return Eigen::VectorXd(2.0 * (x - target)); };
  const LbfgsResult r = minimize_box(f, g, Eigen::VectorXd::Zero(3), box(3, -1, 1));
  EXPECT_NEAR(r.x(0), 1.0, 1e-12);
  EXPECT_NEAR(r.x(1), -1.0, 1e-12);
  EXPECT_NEAR(r.x(2), 0.5, 1e-8);
}

TEST(MinimizeBox, StartIsProjectedAndIteratesStayFeasible) {
  auto f = [](const Eigen::VectorXd& x) { return std::cos(3 * x(0)) + x(1) * x(1) + 0.1 * x(0); };
  auto g = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd((Eigen::VectorXd(2) << -3 * std::sin(3 * x(0)) + 0.1, 2 * x(1)).finished());
  };
  const BoxBounds b = box(2, -2, 2);
  int calls = 0;
  double last = 1e300;
  const LbfgsResult r = minimize_box(f, g, Eigen::Vector2d(10.0, -10.0), b, {},
                                     [&](const Eigen::VectorXd& x, double value) {
                                       ++calls;
                                       EXPECT_TRUE((x.array() >= -2.0).all() && (x.array() <= 2.0).all());
                                       EXPECT_LE(value, last + 1e-15);
                                       last = value;
                                     });
  EXPECT_GE(calls, 2);
  EXPECT_DOUBLE_EQ(r.value, last);
}

TEST(MinimizeBox, IterationCapIsReported) {
  LbfgsOptions options;
  options.max_iterations = 3;
  const Eigen::VectorXd x0 = (Eigen::VectorXd(2) << -1.2, 1.0).finished();
  const LbfgsResult r = minimize_box(rosenbrock, rosenbrock_gradient, x0, box(2, -5, 5), options);
  EXPECT_EQ(r.status, LbfgsStatus::max_iterations);
  EXPECT_EQ(r.iterations, 3);
}

TEST(MinimizeBox, RejectsInconsistentBox) {
  EXPECT_THROW(minimize_box(rosenbrock, rosenbrock_gradient, Eigen::VectorXd::Zero(2), box(3, -1, 1)),
               DataError);
  EXPECT_THROW(minimize_box(rosenbrock, rosenbrock_gradient, Eigen::VectorXd::Zero(2), box(2, 1, -1)),
               DataError);
}

}  // namespace
}  // namespace spinshape
