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
#include <span>
#include <vector>

#include "spinshape/controllers.hpp"
#include "spinshape/dephasing.hpp"
#include "spinshape/dynamics.hpp"
#include "spinshape/network.hpp"
#include "spinshape/spectral.hpp"

namespace spinshape {

enum class OutputNorm { frobenius, trace };

struct Aggregates {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double std = 0.0;  // population standard deviation
};

// Element (n - 1) / 2 of the sorted values.
double lower_median(std::vector<double> values);
Aggregates aggregate(std::span<const double> values);

// Readout of one controller under arbitrary dephasing processes. The
// spectrum of H + D is computed once.
class ControllerResponse {
 public:
  ControllerResponse(const SpinNetwork& net, const Controller& controller);

  const SpectralData& spectrum() const noexcept { return spectrum_; }
  const TransferSpec& transfer() const noexcept { return transfer_; }
  const DensityMatrix& coherent_output() const noexcept { return coherent_; }

  // Throws DegeneracyError when a full-dimension process meets a degenerate
  // spectrum, DataError on other dimension mismatches.
  DensityMatrix output(const DephasingProcess& process, double delta) const;
  // ||rho_D(T) - rho_{D,delta,s}(T)||; exactly 0 at delta = 0.
  double error(const DephasingProcess& process, double delta,
               OutputNorm norm = OutputNorm::frobenius) const;
  double fidelity(const DephasingProcess& process, double delta) const;

 private:
  TransferSpec transfer_;
  SpectralData spectrum_;
  DensityMatrix coherent_;
};

double perturbation_error(const SpinNetwork& net, const Controller& controller,
                          const DephasingProcess& process, double delta,
                          OutputNorm norm = OutputNorm::frobenius);

struct RobustnessOptions {
  OutputNorm norm = OutputNorm::frobenius;
  double eta_step = 1e-3;
  int controller_id = 1;
  int jobs = 1;
};

struct RobustnessReport {
  int controller_id = 0;
  std::vector<double> delta_grid;
  std::vector<Aggregates> error_stats;     // one per delta
  std::vector<Aggregates> fidelity_stats;  // one per delta
  double eta = 0.0;
  std::uint64_t ensemble_seed = 0;
  int ensemble_count = 0;
};

// `points` equally spaced strengths on [0, max_delta].
std::vector<double> uniform_delta_grid(int points = 21, double max_delta = 1.0);

RobustnessReport ensemble_stats(const SpinNetwork& net, const Controller& controller,
                                const Ensemble& ensemble, const std::vector<double>& delta_grid,
                                const RobustnessOptions& options = {});

// Forward difference median_s eps(h, s) / h of the median error at delta = 0.
double sensitivity_eta(const SpinNetwork& net, const Controller& controller,
                       const Ensemble& ensemble, double h = 1e-3,
                       OutputNorm norm = OutputNorm::frobenius, int jobs = 1);

// sum_k <out|Pi_k(H + D + delta S)|in>^2
double asymptotic_fidelity(const SpinNetwork& net, const Controller& controller,
                           const PerturbationStructure& structure, double delta);

// d p_inf / d delta at delta = 0 from projector derivatives.
double asymptotic_fidelity_derivative(const SpinNetwork& net, const Controller& controller,
                                      const PerturbationStructure& structure);

// |d p_inf / d delta| / (1 - p_inf) at delta = 0. Needs a non-degenerate
// spectrum and 1 - p_inf > 1e-12.
double asymptotic_log_sensitivity(const SpinNetwork& net, const Controller& controller,
                                  const PerturbationStructure& structure);

// d_m = |median(eps_1..eps_m) - median(eps_1..eps_M)| for m = 1..M.
std::vector<double> median_convergence(const SpinNetwork& net, const Controller& controller,
                                       const Ensemble& ensemble, double delta,
                                       OutputNorm norm = OutputNorm::frobenius);

struct SensitivityPoint {
  double eta = 0.0;
  double read_time = 0.0;
};

struct LinearCorrelation {
  double pearson_r = 0.0;
  double slope = 0.0;      // of eta against readout time
  double intercept = 0.0;
};

LinearCorrelation sensitivity_time_correlation(std::span<const SensitivityPoint> points);

double pearson_correlation(std::span<const double> x, std::span<const double> y);
// Pearson correlation of average ranks.
double spearman_correlation(std::span<const double> x, std::span<const double> y);

struct Histogram {
  std::vector<double> edges;  // bins + 1 entries
  std::vector<int> counts;
};

Histogram histogram(std::span<const double> values, int bins);

struct FidelityProfile {
  std::vector<double> delta_grid;
  std::vector<Aggregates> stats;
  // Distribution of 1 - p over the ensemble at delta = 1.
  Histogram error_histogram;
};

FidelityProfile fidelity_vs_delta(const SpinNetwork& net, const Controller& controller,
                                  const Ensemble& ensemble, const std::vector<double>& delta_grid,
                                  int bins = 50, int jobs = 1);

}  // namespace spinshape
