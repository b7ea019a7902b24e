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

#include "spinshape/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spinshape/errors.hpp"
#include "spinshape/parallel.hpp"

namespace spinshape {

double lower_median(std::vector<double> values) {
  if (values.empty()) throw DataError("median of an empty sample");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

Aggregates aggregate(std::span<const double> values) {
  if (values.empty()) throw DataError("aggregate of an empty sample");
  Aggregates a;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  a.min = *lo;
  a.max = *hi;
  a.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - a.mean) * (v - a.mean);
  a.std = std::sqrt(var / static_cast<double>(values.size()));
  a.median = lower_median({values.begin(), values.end()});
  return a;
}

ControllerResponse::ControllerResponse(const SpinNetwork& net, const Controller& controller)
    : transfer_(controller.transfer),
      spectrum_(decompose(reduced_hamiltonian(net, controller.bias))),
      coherent_(readout_state(spectrum_, transfer_)) {}

DensityMatrix ControllerResponse::output(const DephasingProcess& process, double delta) const {
  if (process.dim() != spectrum_.cluster_count()) {
    if (process.dim() == spectrum_.dimension()) {
      throw DegeneracyError("controller spectrum has " +
                            std::to_string(spectrum_.cluster_count()) +
                            " distinct eigenvalues; sampled dephasing needs " +
                            std::to_string(process.dim()));
    }
    throw DataError("dephasing dimension " + std::to_string(process.dim()) +
                    " does not match network size " + std::to_string(spectrum_.dimension()));
  }
  return readout_state(spectrum_, transfer_, process.rates(delta));
}

double ControllerResponse::error(const DephasingProcess& process, double delta,
                                 OutputNorm norm) const {
  const DensityMatrix dephased = output(process, delta);
  if (delta == 0.0) return 0.0;
  const Eigen::MatrixXcd diff = coherent_.matrix() - dephased.matrix();
  if (norm == OutputNorm::frobenius) return diff.norm();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(diff, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

double ControllerResponse::fidelity(const DephasingProcess& process, double delta) const {
  return output(process, delta).population(transfer_.out_node);
}

double perturbation_error(const SpinNetwork& net, const Controller& controller,
                          const DephasingProcess& process, double delta, OutputNorm norm) {
  return ControllerResponse(net, controller).error(process, delta, norm);
}

std::vector<double> uniform_delta_grid(int points, double max_delta) {
  if (points < 2) throw DataError("delta grid needs at least 2 points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[i] = max_delta * i / (points - 1);
  return grid;
}

namespace {

void require_nonempty(const Ensemble& ensemble) {
  if (ensemble.processes.empty()) throw DataError("dephasing ensemble is empty");
}

std::vector<double> errors_at(const ControllerResponse& response, const Ensemble& ensemble,
                              double delta, OutputNorm norm, int jobs) {
  std::vector<double> out(ensemble.processes.size());
  parallel_for(out.size(), jobs, [&](std::size_t s) {
    out[s] = response.error(ensemble.processes[s], delta, norm);
  });
  return out;
}

std::vector<double> fidelities_at(const ControllerResponse& response, const Ensemble& ensemble,
                                  double delta, int jobs) {
  std::vector<double> out(ensemble.processes.size());
  parallel_for(out.size(), jobs, [&](std::size_t s) {
    out[s] = response.fidelity(ensemble.processes[s], delta);
  });
  return out;
}

}  // namespace

RobustnessReport ensemble_stats(const SpinNetwork& net, const Controller& controller,
                                const Ensemble& ensemble, const std::vector<double>& delta_grid,
                                const RobustnessOptions& options) {
  require_nonempty(ensemble);
  if (!(options.eta_step > 0.0)) throw DataError("finite-difference step must be > 0");
  const ControllerResponse response(net, controller);
  RobustnessReport report;
  report.controller_id = options.controller_id;
  report.delta_grid = delta_grid;
  report.ensemble_seed = ensemble.seed;
  report.ensemble_count = ensemble.count();
  for (double delta : delta_grid) {
    const std::vector<double> eps = errors_at(response, ensemble, delta, options.norm, options.jobs);
    const std::vector<double> fid = fidelities_at(response, ensemble, delta, options.jobs);
    report.error_stats.push_back(aggregate(eps));
    report.fidelity_stats.push_back(aggregate(fid));
  }
  report.eta =
      lower_median(errors_at(response, ensemble, options.eta_step, options.norm, options.jobs)) /
      options.eta_step;
  return report;
}

double sensitivity_eta(const SpinNetwork& net, const Controller& controller,
                       const Ensemble& ensemble, double h, OutputNorm norm, int jobs) {
  require_nonempty(ensemble);
  if (!(h > 0.0)) throw DataError("finite-difference step must be > 0");
  const ControllerResponse response(net, controller);
  return lower_median(errors_at(response, ensemble, h, norm, jobs)) / h;
}

namespace {

Eigen::MatrixXd controlled_hamiltonian(const SpinNetwork& net, const Controller& controller,
                                       const PerturbationStructure& structure) {
  Eigen::MatrixXd h = reduced_hamiltonian(net, controller.bias);
  if (structure.matrix().rows() != h.rows()) {
    throw DataError("perturbation structure dimension does not match network");
  }
  controller.transfer.validate(net.size());
  return h;
}

}  // namespace

double asymptotic_fidelity(const SpinNetwork& net, const Controller& controller,
                           const PerturbationStructure& structure, double delta) {
  const Eigen::MatrixXd h = controlled_hamiltonian(net, controller, structure);
  const SpectralData spec = decompose(h + delta * structure.matrix());
  return longterm_average_fidelity(spec, controller.transfer);
}

double asymptotic_fidelity_derivative(const SpinNetwork& net, const Controller& controller,
                                      const PerturbationStructure& structure) {
  const Eigen::MatrixXd h = controlled_hamiltonian(net, controller, structure);
  const SpectralData spec = decompose(h);
  if (!spec.is_nondegenerate()) {
    throw DegeneracyError("asymptotic sensitivity needs a non-degenerate spectrum");
  }
  const int in = controller.transfer.in_node - 1;
  const int out = controller.transfer.out_node - 1;
  double derivative = 0.0;
  for (int k = 0; k < spec.cluster_count(); ++k) {
    const Eigen::MatrixXd d_projector = projector_derivative(spec, structure, k);
    derivative += 2.0 * d_projector(out, in) * spec.projectors[k](in, out);
  }
  return derivative;
}

double asymptotic_log_sensitivity(const SpinNetwork& net, const Controller& controller,
                                  const PerturbationStructure& structure) {
  const double derivative = asymptotic_fidelity_derivative(net, controller, structure);
  const double error = 1.0 - asymptotic_fidelity(net, controller, structure, 0.0);
  if (error <= 1e-12) {
    throw NumericalError("asymptotic transfer error vanishes; log-sensitivity undefined");
  }
  return std::abs(derivative) / error;
}

std::vector<double> median_convergence(const SpinNetwork& net, const Controller& controller,
                                       const Ensemble& ensemble, double delta, OutputNorm norm) {
  if (ensemble.count() < 10) throw DataError("median convergence needs at least 10 processes");
  const ControllerResponse response(net, controller);
  const std::vector<double> eps = errors_at(response, ensemble, delta, norm, 1);
  const double full = lower_median(eps);
  std::vector<double> deviations;
  deviations.reserve(eps.size());
  for (std::size_t m = 1; m <= eps.size(); ++m) {
    deviations.push_back(std::abs(lower_median({eps.begin(), eps.begin() + static_cast<std::ptrdiff_t>(m)}) - full));
  }
  return deviations;
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("correlation inputs differ in length");
  if (x.size() < 2) throw DataError("correlation needs at least 2 points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw DataError("correlation undefined for zero-variance input");
  return sxy / std::sqrt(sxx * syy);
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman_correlation(std::span<const double> x, std::span<const double> y) {
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  return pearson_correlation(rx, ry);
}

LinearCorrelation sensitivity_time_correlation(std::span<const SensitivityPoint> points) {
  if (points.size() < 3) throw DataError("correlation needs at least 3 points");
  std::vector<double> t, eta;
  for (const SensitivityPoint& p : points) {
    t.push_back(p.read_time);
    eta.push_back(p.eta);
  }
  LinearCorrelation out;
  out.pearson_r = pearson_correlation(t, eta);
  const double n = static_cast<double>(t.size());
  const double mt = std::accumulate(t.begin(), t.end(), 0.0) / n;
  const double me = std::accumulate(eta.begin(), eta.end(), 0.0) / n;
  double stt = 0.0, ste = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - mt) * (t[i] - mt);
    ste += (t[i] - mt) * (eta[i] - me);
  }
  out.slope = ste / stt;
  out.intercept = me - out.slope * mt;
  return out;
}

Histogram histogram(std::span<const double> values, int bins) {
  if (bins < 1) throw DataError("histogram needs at least one bin");
  if (values.empty()) throw DataError("histogram of an empty sample");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it > lo ? *hi_it : lo + 1e-12;
  Histogram h;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (int b = 0; b <= bins; ++b) h.edges.push_back(lo + (hi - lo) * b / bins);
  for (double v : values) {
    int b = static_cast<int>((v - lo) / (hi - lo) * bins);
    h.counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))] += 1;
  }
  return h;
}

FidelityProfile fidelity_vs_delta(const SpinNetwork& net, const Controller& controller,
                                  const Ensemble& ensemble, const std::vector<double>& delta_grid,
                                  int bins, int jobs) {
  require_nonempty(ensemble);
  const ControllerResponse response(net, controller);
  FidelityProfile profile;
  profile.delta_grid = delta_grid;
  for (double delta : delta_grid) {
    profile.stats.push_back(aggregate(fidelities_at(response, ensemble, delta, jobs)));
  }
  std::vector<double> errors = fidelities_at(response, ensemble, 1.0, jobs);
  for (double& e : errors) e = 1.0 - e;
  profile.error_histogram = histogram(errors, bins);
  return profile;
}

}  // namespace spinshape
