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

#include "spinshape/dynamics.hpp"

#include <cmath>
#include <string>

#include "spinshape/errors.hpp"

namespace spinshape {

using cplx = std::complex<double>;

void TransferSpec::validate(int n_spins) const {
  if (in_node < 1 || in_node > n_spins || out_node < 1 || out_node > n_spins) {
    throw DataError("transfer nodes must lie in 1.." + std::to_string(n_spins));
  }
  if (!std::isfinite(read_time) || read_time < 0.0) throw DataError("readout time must be >= 0");
  if (!std::isfinite(window_half_width) || window_half_width < 0.0) {
    throw DataError("window half-width must be >= 0");
  }
  if (read_time - window_half_width < 0.0) {
    throw DataError("readout window starts before t = 0");
  }
}

DensityMatrix DensityMatrix::from_matrix(Eigen::MatrixXcd rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw DataError("density matrix must be square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw DataError("density matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - cplx(1.0, 0.0)) > 1e-10) throw DataError("density matrix trace != 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-10) throw DataError("density matrix is not positive");
  return DensityMatrix(std::move(rho));
}

DensityMatrix DensityMatrix::pure(int n, int node) {
  if (node < 1 || node > n) throw DataError("node outside 1.." + std::to_string(n));
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
  rho(node - 1, node - 1) = 1.0;
  return DensityMatrix(std::move(rho));
}

DephasingRates::DephasingRates(Eigen::MatrixXd gamma) : gamma_(std::move(gamma)) {
  if (gamma_.rows() != gamma_.cols()) throw DataError("rate matrix must be square");
  if (!gamma_.allFinite()) throw DataError("rates must be finite");
  if (gamma_ != gamma_.transpose()) throw DataError("rate matrix must be symmetric");
  if (!gamma_.diagonal().isZero(0.0)) throw DataError("rate matrix diagonal must vanish");
  if (gamma_.maxCoeff() > 0.0) throw DataError("dephasing rates must be <= 0");
}

double DephasingRates::slowest_rate() const {
  double slowest = 0.0;
  for (Eigen::Index k = 0; k < gamma_.rows(); ++k) {
    for (Eigen::Index l = 0; l < k; ++l) {
      const double g = std::abs(gamma_(k, l));
      if (g > 0.0 && (slowest == 0.0 || g < slowest)) slowest = g;
    }
  }
  return slowest;
}

namespace {

cplx sinhc(cplx x) {
  if (std::abs(x) < 1e-3) {
    const cplx x2 = x * x;
    return 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0));
  }
  return std::sinh(x) / x;
}

double rate(const OptionalRates& rates, int k, int l) {
  return rates ? rates->matrix()(k, l) : 0.0;
}

void check_compatible(const SpectralData& spec, const OptionalRates& rates) {
  if (rates && rates->size() != spec.cluster_count()) {
    throw DataError("rate matrix has " + std::to_string(rates->size()) +
                    " eigenspaces, spectrum has " + std::to_string(spec.cluster_count()));
  }
}

// sum_kl factor(k,l) Pi_k rho0 Pi_l, re-symmetrized.
template <class Factor>
Eigen::MatrixXcd combine_blocks(const SpectralData& spec, const Eigen::MatrixXcd& rho0,
                                Factor&& factor) {
  const int clusters = spec.cluster_count();
  std::vector<Eigen::MatrixXcd> left(clusters);
  for (int k = 0; k < clusters; ++k) left[k] = spec.projectors[k].cast<cplx>() * rho0;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(rho0.rows(), rho0.cols());
  for (int k = 0; k < clusters; ++k) {
    for (int l = 0; l < clusters; ++l) {
      rho += factor(k, l) * (left[k] * spec.projectors[l].cast<cplx>());
    }
  }
  return 0.5 * (rho + rho.adjoint());
}

}  // namespace

cplx block_factor(double omega, double gamma, double read_time, double half_width) {
  const cplx z(gamma, -omega);
  const cplx centre = std::exp(z * read_time);
  if (half_width == 0.0) return centre;
  return centre * sinhc(z * half_width);
}

DensityMatrix evolve(const SpectralData& spec, const DensityMatrix& rho0, double t,
                     const OptionalRates& rates) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DataError("evolution time must be >= 0");
  if (rho0.size() != spec.dimension()) throw DataError("state dimension mismatch");
  check_compatible(spec, rates);
  if (t == 0.0) return rho0;
  return DensityMatrix::trusted(combine_blocks(spec, rho0.matrix(), [&](int k, int l) {
    return block_factor(spec.eigenvalues(k) - spec.eigenvalues(l), rate(rates, k, l), t, 0.0);
  }));
}

DensityMatrix window_average(const SpectralData& spec, const DensityMatrix& rho0, double read_time,
                             double half_width, const OptionalRates& rates) {
  if (!(half_width > 0.0)) throw DataError("window half-width must be > 0");
  if (read_time - half_width < 0.0) throw DataError("readout window starts before t = 0");
  if (rho0.size() != spec.dimension()) throw DataError("state dimension mismatch");
  check_compatible(spec, rates);
  return DensityMatrix::trusted(combine_blocks(spec, rho0.matrix(), [&](int k, int l) {
    return block_factor(spec.eigenvalues(k) - spec.eigenvalues(l), rate(rates, k, l), read_time,
                        half_width);
  }));
}

DensityMatrix readout_state(const SpectralData& spec, const TransferSpec& transfer,
                            const OptionalRates& rates) {
  transfer.validate(spec.dimension());
  check_compatible(spec, rates);
  const int n = spec.dimension();
  const int clusters = spec.cluster_count();
  if (transfer.read_time == 0.0 && !transfer.windowed()) {
    return DensityMatrix::pure(n, transfer.in_node);
  }
  // Pure input: Pi_k rho0 Pi_l = u_k u_l^T with u_k = Pi_k |in>.
  Eigen::MatrixXd u(n, clusters);
  for (int k = 0; k < clusters; ++k) u.col(k) = spec.projectors[k].col(transfer.in_node - 1);
  Eigen::MatrixXcd factors(clusters, clusters);
  for (int k = 0; k < clusters; ++k) {
    for (int l = 0; l < clusters; ++l) {
      factors(k, l) = block_factor(spec.eigenvalues(k) - spec.eigenvalues(l), rate(rates, k, l),
                                   transfer.read_time, transfer.window_half_width);
    }
  }
  const Eigen::MatrixXcd uc = u.cast<cplx>();
  Eigen::MatrixXcd rho = uc * factors * uc.transpose();
  return DensityMatrix::trusted(0.5 * (rho + rho.adjoint()));
}

namespace {

// <out|rho|out> with rho0 = |in><in|: sum_kl y_k y_l Re f_kl.
double overlap_fidelity(const SpectralData& spec, const TransferSpec& transfer,
                        const OptionalRates& rates, double half_width) {
  transfer.validate(spec.dimension());
  check_compatible(spec, rates);
  if (transfer.read_time == 0.0 && half_width == 0.0) {
    return transfer.in_node == transfer.out_node ? 1.0 : 0.0;
  }
  const Eigen::VectorXd y = overlap_vector(spec, transfer.in_node, transfer.out_node);
  double p = 0.0;
  for (int k = 0; k < y.size(); ++k) {
    p += y(k) * y(k) * block_factor(0.0, 0.0, transfer.read_time, half_width).real();
    for (int l = 0; l < k; ++l) {
      const cplx f = block_factor(spec.eigenvalues(k) - spec.eigenvalues(l), rate(rates, k, l),
                                  transfer.read_time, half_width);
      p += 2.0 * y(k) * y(l) * f.real();
    }
  }
  return p;
}

}  // namespace

double instant_fidelity(const SpectralData& spec, const TransferSpec& transfer,
                        const OptionalRates& rates) {
  return overlap_fidelity(spec, transfer, rates, 0.0);
}

double window_fidelity(const SpectralData& spec, const TransferSpec& transfer,
                       const OptionalRates& rates) {
  if (!transfer.windowed()) throw DataError("window fidelity needs a half-width > 0");
  return overlap_fidelity(spec, transfer, rates, transfer.window_half_width);
}

double transfer_fidelity(const SpectralData& spec, const TransferSpec& transfer,
                         const OptionalRates& rates) {
  return transfer.windowed() ? window_fidelity(spec, transfer, rates)
                             : instant_fidelity(spec, transfer, rates);
}

DensityMatrix steady_state(const SpectralData& spec, const DensityMatrix& rho0) {
  if (rho0.size() != spec.dimension()) throw DataError("state dimension mismatch");
  return DensityMatrix::trusted(
      combine_blocks(spec, rho0.matrix(), [](int k, int l) { return cplx(k == l ? 1.0 : 0.0); }));
}

Eigen::VectorXd overlap_vector(const SpectralData& spec, int in_node, int out_node) {
  const int n = spec.dimension();
  if (in_node < 1 || in_node > n || out_node < 1 || out_node > n) {
    throw DataError("transfer nodes must lie in 1.." + std::to_string(n));
  }
  Eigen::VectorXd y(spec.cluster_count());
  for (int k = 0; k < spec.cluster_count(); ++k) {
    y(k) = spec.projectors[k](out_node - 1, in_node - 1);
  }
  return y;
}

double longterm_average_fidelity(const SpectralData& spec, const TransferSpec& transfer) {
  return overlap_vector(spec, transfer.in_node, transfer.out_node).squaredNorm();
}

OverlapNorms overlap_norms(const SpectralData& spec, const TransferSpec& transfer) {
  const Eigen::VectorXd y = overlap_vector(spec, transfer.in_node, transfer.out_node);
  return {y.squaredNorm(), y.lpNorm<1>()};
}

}  // namespace spinshape
