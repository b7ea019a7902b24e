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

#include "spinshape/controllers.hpp"

#include <algorithm>
#include <complex>
#include <numeric>

#include "spinshape/errors.hpp"
#include "spinshape/optimizer.hpp"
#include "spinshape/parallel.hpp"
#include "spinshape/rng.hpp"
#include "spinshape/spectral.hpp"

namespace spinshape {

double objective(const SpinNetwork& net, const BiasField& bias, const TransferSpec& transfer) {
  const SpectralData spec = decompose(reduced_hamiltonian(net, bias));
  return 1.0 - transfer_fidelity(spec, transfer);
}

Eigen::VectorXd objective_gradient(const SpinNetwork& net, const BiasField& bias,
                                   const TransferSpec& transfer, bool with_time) {
  using cplx = std::complex<double>;
  transfer.validate(net.size());
  if (transfer.windowed()) throw DataError("analytic gradient covers instantaneous readout only");
  const SpectralData spec = decompose(reduced_hamiltonian(net, bias));
  if (!spec.is_nondegenerate()) throw DegeneracyError("analytic gradient needs a simple spectrum");

  const int n = net.size();
  const int in = transfer.in_node - 1;
  const int out = transfer.out_node - 1;
  const double t = transfer.read_time;
  Eigen::MatrixXd v(n, n);
  for (int j = 0; j < n; ++j) v.col(j) = spec.eigenvector(j);
  const Eigen::VectorXd& lambda = spec.eigenvalues;

  // p = |a|^2 with a = sum_j v_j[out] v_j[in] exp(-i lambda_j T).
  Eigen::VectorXcd phase(n);
  cplx a = 0.0;
  for (int j = 0; j < n; ++j) {
    phase(j) = std::exp(cplx(0.0, -lambda(j) * t));
    a += v(out, j) * v(in, j) * phase(j);
  }

  Eigen::VectorXd grad(n + (with_time ? 1 : 0));
  for (int b = 0; b < n; ++b) {
    // dH/dD_b = e_b e_b^T: d lambda_j = v_j[b]^2,
    // d v_j = sum_{i != j} v_i[b] v_j[b] / (lambda_j - lambda_i) v_i.
    cplx da = 0.0;
    for (int j = 0; j < n; ++j) {
      double dv_out = 0.0;
      double dv_in = 0.0;
      for (int i = 0; i < n; ++i) {
        if (i == j) continue;
        const double c = v(b, i) * v(b, j) / (lambda(j) - lambda(i));
        dv_out += c * v(out, i);
        dv_in += c * v(in, i);
      }
      const double d_lambda = v(b, j) * v(b, j);
      da += (dv_out * v(in, j) + v(out, j) * dv_in) * phase(j) +
            v(out, j) * v(in, j) * cplx(0.0, -t * d_lambda) * phase(j);
    }
    grad(b) = -2.0 * (std::conj(a) * da).real();
  }
  if (with_time) {
    cplx da = 0.0;
    for (int j = 0; j < n; ++j) da += v(out, j) * v(in, j) * cplx(0.0, -lambda(j)) * phase(j);
    grad(n) = -2.0 * (std::conj(a) * da).real();
  }
  return grad;
}

double controller_fidelity(const SpinNetwork& net, const Controller& controller) {
  return 1.0 - objective(net, controller.bias, controller.transfer);
}

namespace {

struct RestartOutcome {
  Controller controller;
  double error = 1.0;
};

void validate_options(const SpinNetwork& net, const TransferSpec& transfer,
                      const OptimizeOptions& options) {
  transfer.validate(net.size());
  if (net.kappa() != 0.0) {
    throw UnsupportedCouplingError("controller synthesis requires XX coupling (kappa = 0)");
  }
  if (options.restarts < 1) throw DataError("restarts must be >= 1");
  if (options.max_iterations < 0) throw DataError("max_iterations must be >= 0");
  if (!(options.bias_lower <= options.bias_upper)) throw DataError("invalid bias box");
  if (!(options.gradient_step > 0.0)) throw DataError("gradient step must be > 0");
  if (options.initial_bias && options.initial_bias->size() != net.size()) {
    throw DataError("initial bias length does not match network size");
  }
  if (options.time_range) {
    const TimeRange& r = *options.time_range;
    if (!(r.lo <= r.hi)) throw DataError("invalid readout time range");
    if (r.lo - options.gradient_step < transfer.window_half_width) {
      throw DataError("readout time range must stay above the window half-width");
    }
  }
}

RestartOutcome run_restart(const SpinNetwork& net, const TransferSpec& transfer,
                           const OptimizeOptions& options, int restart) {
  const int n = net.size();
  const bool timed = options.time_range.has_value();
  const Eigen::Index dim = n + (timed ? 1 : 0);

  BoxBounds box{Eigen::VectorXd::Constant(dim, options.bias_lower),
                Eigen::VectorXd::Constant(dim, options.bias_upper)};
  Engine engine = make_engine(options.seed, "restart", static_cast<std::uint64_t>(restart));
  Eigen::VectorXd x0(dim);
  for (int i = 0; i < n; ++i) x0(i) = uniform(engine, options.bias_lower, options.bias_upper);
  if (timed) {
    box.lower(n) = options.time_range->lo;
    box.upper(n) = options.time_range->hi;
    x0(n) = uniform(engine, options.time_range->lo, options.time_range->hi);
  }
  if (restart == 0 && options.initial_bias) x0.head(n) = options.initial_bias->values();

  auto unpack = [&](const Eigen::VectorXd& x) {
    TransferSpec t = transfer;
    if (timed) t.read_time = x(n);
    return std::pair{BiasField(x.head(n)), t};
  };
  const ValueFunction f = [&](const Eigen::VectorXd& x) {
    const auto [bias, t] = unpack(x);
    return objective(net, bias, t);
  };
  const GradientFunction grad = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    if (options.analytic_gradient && !transfer.windowed()) {
      const auto [bias, t] = unpack(x);
      try {
        return objective_gradient(net, bias, t, timed);
      } catch (const DegeneracyError&) {
        // near-degenerate point: fall back to differences
      }
    }
    return central_difference_gradient(f, x, options.gradient_step);
  };
  IterateObserver observer;
  if (options.on_iterate) {
    observer = [&](const Eigen::VectorXd& x, double value) {
      const auto [bias, t] = unpack(x);
      options.on_iterate(bias, t.read_time, value);
    };
  }

  LbfgsOptions lbfgs;
  lbfgs.max_iterations = options.max_iterations;
  lbfgs.gradient_tolerance = options.gradient_tolerance;
  const LbfgsResult result = minimize_box(f, grad, x0, box, lbfgs, observer);

  auto [bias, t] = unpack(result.x);
  const Eigen::VectorXd centered = bias.values().array() - bias.values().mean();
  RestartOutcome out;
  out.controller.bias = BiasField(centered);
  out.controller.transfer = t;
  out.controller.provenance = {options.seed, restart, result.iterations};
  out.error = objective(net, out.controller.bias, t);
  out.controller.nominal_fidelity = 1.0 - out.error;
  return out;
}

}  // namespace

Controller optimize_controller(const SpinNetwork& net, const TransferSpec& transfer,
                               const OptimizeOptions& options) {
  validate_options(net, transfer, options);
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(options.restarts));
  parallel_for(outcomes.size(), options.jobs, [&](std::size_t r) {
    outcomes[r] = run_restart(net, transfer, options, static_cast<int>(r));
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r) {
    if (outcomes[r].controller.nominal_fidelity > outcomes[best].controller.nominal_fidelity) {
      best = r;
    }
  }
  return outcomes[best].controller;
}

std::vector<Controller> generate_controller_set(const SpinNetwork& net,
                                                const TransferSpec& transfer, int count,
                                                const OptimizeOptions& options) {
  if (count < 1) throw DataError("controller count must be >= 1");
  validate_options(net, transfer, options);
  std::vector<Controller> controllers(static_cast<std::size_t>(count));
  parallel_for(controllers.size(), options.jobs, [&](std::size_t i) {
    OptimizeOptions local = options;
    local.seed = derive_seed(options.seed, "controller", i);
    local.jobs = 1;
    controllers[i] = optimize_controller(net, transfer, local);
  });

  std::vector<std::size_t> order(controllers.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return controllers[a].nominal_fidelity > controllers[b].nominal_fidelity;
  });
  std::vector<Controller> ranked;
  ranked.reserve(order.size());
  for (std::size_t i : order) ranked.push_back(std::move(controllers[i]));

  for (std::size_t i = 1; i < ranked.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double gap = (ranked[i].bias.values() - ranked[j].bias.values()).lpNorm<Eigen::Infinity>();
      if (gap <= 1e-6) {
        ranked[i].duplicate = true;
        break;
      }
    }
  }
  return ranked;
}

}  // namespace spinshape
