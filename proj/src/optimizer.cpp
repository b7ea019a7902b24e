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

#include <cmath>
#include <deque>

#include "spinshape/errors.hpp"

namespace spinshape {

Eigen::VectorXd central_difference_gradient(const ValueFunction& f, const Eigen::VectorXd& x,
                                            double step) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + step;
    const double up = f(probe);
    probe(i) = x(i) - step;
    const double down = f(probe);
    probe(i) = x(i);
    g(i) = (up - down) / (2.0 * step);
  }
  return g;
}

namespace {

struct Correction {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double rho;
};

Eigen::VectorXd two_loop(const std::deque<Correction>& memory, const Eigen::VectorXd& g) {
  Eigen::VectorXd q = g;
  std::vector<double> alpha(memory.size());
  for (std::size_t i = memory.size(); i-- > 0;) {
    alpha[i] = memory[i].rho * memory[i].s.dot(q);
    q -= alpha[i] * memory[i].y;
  }
  if (!memory.empty()) {
    const Correction& last = memory.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
  }
  for (std::size_t i = 0; i < memory.size(); ++i) {
    const double beta = memory[i].rho * memory[i].y.dot(q);
    q += (alpha[i] - beta) * memory[i].s;
  }
  return q;
}

}  // namespace

LbfgsResult minimize_box(const ValueFunction& f, const GradientFunction& gradient,
                         const Eigen::VectorXd& x0, const BoxBounds& box,
                         const LbfgsOptions& options, const IterateObserver& observer) {
  const Eigen::Index n = x0.size();
  if (box.lower.size() != n || box.upper.size() != n) throw DataError("box dimension mismatch");
  if ((box.lower.array() > box.upper.array()).any()) throw DataError("box lower bound above upper");

  LbfgsResult result;
  Eigen::VectorXd x = box.project(x0);
  double fx = f(x);
  Eigen::VectorXd g = gradient(x);
  result.evaluations = 1;
  if (observer) observer(x, fx);

  std::deque<Correction> memory;
  result.status = LbfgsStatus::max_iterations;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const Eigen::VectorXd projected_gradient = x - box.project(x - g);
    if (projected_gradient.lpNorm<Eigen::Infinity>() <= options.gradient_tolerance) {
      result.status = LbfgsStatus::converged;
      break;
    }

    Eigen::VectorXd free = Eigen::VectorXd::Ones(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool pinned = box.lower(i) == box.upper(i);
      const bool at_lower = x(i) <= box.lower(i) && g(i) > 0.0;
      const bool at_upper = x(i) >= box.upper(i) && g(i) < 0.0;
      if (pinned || at_lower || at_upper) free(i) = 0.0;
    }
    const Eigen::VectorXd g_free = g.cwiseProduct(free);

    bool accepted = false;
    Eigen::VectorXd x_next;
    double f_next = fx;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      Eigen::VectorXd direction = -two_loop(memory, g_free).cwiseProduct(free);
      if (!direction.allFinite() || g_free.dot(direction) >= 0.0) {
        memory.clear();
        direction = -g_free;
      }
      double step = 1.0;
      if (memory.empty()) {
        step = std::min(1.0, 1.0 / direction.lpNorm<Eigen::Infinity>());
      }
      for (int ls = 0; ls < options.max_line_search; ++ls, step *= 0.5) {
        x_next = box.project(x + step * direction);
        const Eigen::VectorXd delta = x_next - x;
        if (delta.lpNorm<Eigen::Infinity>() == 0.0) break;
        f_next = f(x_next);
        ++result.evaluations;
        if (std::isfinite(f_next) && f_next <= fx + options.armijo * g.dot(delta)) {
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        if (memory.empty()) break;
        memory.clear();
      }
    }
    if (!accepted) {
      result.status = LbfgsStatus::line_search_failed;
      break;
    }

    const Eigen::VectorXd g_next = gradient(x_next);
    Correction c{x_next - x, g_next - g, 0.0};
    const double curvature = c.s.dot(c.y);
    if (curvature > 1e-12 * c.y.squaredNorm() && curvature > 0.0) {
      c.rho = 1.0 / curvature;
      memory.push_back(std::move(c));
      if (static_cast<int>(memory.size()) > options.memory) memory.pop_front();
    }
    x = std::move(x_next);
    fx = f_next;
    g = g_next;
    ++result.iterations;
    if (observer) observer(x, fx);
  }

  result.x = std::move(x);
  result.value = fx;
  result.gradient = std::move(g);
  return result;
}

}  // namespace spinshape
