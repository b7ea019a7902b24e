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

#include <complex>
#include <optional>

#include "spinshape/spectral.hpp"

namespace spinshape {

// Excitation transfer |in> -> |out> read at time T, optionally averaged over
// [T - dT, T + dT]. Nodes are 1-based.
struct TransferSpec {
  int in_node = 1;
  int out_node = 2;
  double read_time = 0.0;
  double window_half_width = 0.0;

  bool windowed() const noexcept { return window_half_width > 0.0; }
  // Throws DataError when nodes fall outside 1..n or times are invalid.
  void validate(int n_spins) const;
};

class DensityMatrix {
 public:
  // Validates Hermiticity (1e-12), unit trace (1e-10), eigenvalues >= -1e-10.
  static DensityMatrix from_matrix(Eigen::MatrixXcd rho);
  static DensityMatrix pure(int n, int node);
  // Skips validation; used for propagated states whose physicality follows
  // from construction.
  static DensityMatrix trusted(Eigen::MatrixXcd rho) { return DensityMatrix(std::move(rho)); }

  const Eigen::MatrixXcd& matrix() const noexcept { return rho_; }
  int size() const noexcept { return static_cast<int>(rho_.rows()); }
  // <node|rho|node> for a 1-based node.
  double population(int node) const { return rho_(node - 1, node - 1).real(); }

 private:
  explicit DensityMatrix(Eigen::MatrixXcd rho) : rho_(std::move(rho)) {}
  Eigen::MatrixXcd rho_;
};

// Dephasing rates gamma_kl <= 0 between eigenspace clusters: symmetric with a
// zero diagonal.
class DephasingRates {
 public:
  explicit DephasingRates(Eigen::MatrixXd gamma);
  static DephasingRates none(int clusters) { return DephasingRates(Eigen::MatrixXd::Zero(clusters, clusters)); }

  const Eigen::MatrixXd& matrix() const noexcept { return gamma_; }
  int size() const noexcept { return static_cast<int>(gamma_.rows()); }
  // Smallest non-zero |gamma_kl|, 0 when all vanish.
  double slowest_rate() const;

 private:
  Eigen::MatrixXd gamma_;
};

using OptionalRates = std::optional<DephasingRates>;

// rho(t) = sum_kl exp(-t (j w_kl - g_kl)) Pi_k rho0 Pi_l.
DensityMatrix evolve(const SpectralData& spec, const DensityMatrix& rho0, double t,
                     const OptionalRates& rates = std::nullopt);

// (1 / 2dT) * integral of rho(t) over [T - dT, T + dT], in closed form.
DensityMatrix window_average(const SpectralData& spec, const DensityMatrix& rho0, double read_time,
                             double half_width, const OptionalRates& rates = std::nullopt);

// State at the readout specification: rho(T) or its window average.
DensityMatrix readout_state(const SpectralData& spec, const TransferSpec& transfer,
                            const OptionalRates& rates = std::nullopt);

double instant_fidelity(const SpectralData& spec, const TransferSpec& transfer,
                        const OptionalRates& rates = std::nullopt);
double window_fidelity(const SpectralData& spec, const TransferSpec& transfer,
                       const OptionalRates& rates = std::nullopt);
// Instant or window fidelity depending on transfer.windowed().
double transfer_fidelity(const SpectralData& spec, const TransferSpec& transfer,
                         const OptionalRates& rates = std::nullopt);

DensityMatrix steady_state(const SpectralData& spec, const DensityMatrix& rho0);

// sum_k <out|Pi_k|in>^2
double longterm_average_fidelity(const SpectralData& spec, const TransferSpec& transfer);

// y_k = <out|Pi_k|in>
Eigen::VectorXd overlap_vector(const SpectralData& spec, int in_node, int out_node);

struct OverlapNorms {
  double l2_sq = 0.0;
  double l1 = 0.0;
};

OverlapNorms overlap_norms(const SpectralData& spec, const TransferSpec& transfer);

// Time factor of eigenblock (k,l) at the readout: exp(z T) for instantaneous
// readout, exp(z T) sinh(z dT) / (z dT) for a window, with z = -j w + g.
std::complex<double> block_factor(double omega, double gamma, double read_time, double half_width);

}  // namespace spinshape
