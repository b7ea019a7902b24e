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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "spinshape/errors.hpp"
#include "spinshape/network.hpp"

namespace spinshape {
namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd two_level() { return (Eigen::MatrixXd(2, 2) << 0, 1, 1, 0).finished(); }

DephasingRates uniform_rates(int k, double gamma) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Constant(k, k, -gamma);
  g.diagonal().setZero();
  return DephasingRates(g);
}

// Symmetric, zero diagonal, entries in [-scale, 0].
DephasingRates random_rates(int k, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, scale);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < i; ++j) g(i, j) = g(j, i) = -u(rng);
  }
  return DephasingRates(g);
}

Eigen::MatrixXd random_bias_ring(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d(i) = u(rng);
  return reduced_hamiltonian(SpinNetwork::build(Topology::ring, n, 1.0), BiasField(d));
}

TEST(TwoLevel, PerfectCoherentTransfer) {
  const SpectralData spec = decompose(two_level());
  const TransferSpec t{1, 2, kPi / 2, 0.0};
  EXPECT_NEAR(instant_fidelity(spec, t), 1.0, 1e-12);
  EXPECT_NEAR(transfer_fidelity(spec, t), 1.0, 1e-12);
  EXPECT_NEAR(instant_fidelity(spec, {1, 2, kPi, 0.0}), 0.0, 1e-12);
}

TEST(TwoLevel, UnitDephasingFidelity) {
  const SpectralData spec = decompose(two_level());
  const double p = instant_fidelity(spec, {1, 2, kPi / 2, 0.0}, uniform_rates(2, 1.0));
  EXPECT_NEAR(p, 0.603939788175381, 1e-12);
}

TEST(Evolve, ZeroTimeReturnsInitialStateExactly) {
  std::mt19937_64 rng(1);
  const SpectralData spec = decompose(random_bias_ring(5, rng));
  const DensityMatrix rho0 = DensityMatrix::pure(5, 3);
  EXPECT_EQ(evolve(spec, rho0, 0.0).matrix(), rho0.matrix());
  EXPECT_EQ(evolve(spec, rho0, 0.0, random_rates(5, 1.0, rng)).matrix(), rho0.matrix());
}

TEST(Evolve, MatchesRungeKuttaOracle) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 3 + trial % 3;
    const Eigen::MatrixXd h = random_bias_ring(n, rng);
    const SpectralData spec = decompose(h);
    ASSERT_TRUE(spec.is_nondegenerate());
    const DephasingRates rates = random_rates(n, 0.5, rng);
    const DensityMatrix rho0 = DensityMatrix::pure(n, 1);
    const auto dissipator = oracle::rate_dissipator(oracle::simple_projectors(h), rates.matrix());
    for (double t : {0.1, 1.0, 7.0}) {
      const Eigen::MatrixXcd expected = oracle::integrate_master_equation(h, dissipator, rho0.matrix(), t);
      EXPECT_LT((evolve(spec, rho0, t, rates).matrix() - expected).cwiseAbs().maxCoeff(), 1e-8);
      const Eigen::MatrixXcd coherent =
          oracle::integrate_master_equation(h, [](const Eigen::MatrixXcd& r) { return Eigen::MatrixXcd::Zero(r.rows(), r.cols()); },
                                            rho0.matrix(), t);
      EXPECT_LT((evolve(spec, rho0, t).matrix() - coherent).cwiseAbs().maxCoeff(), 1e-8);
    }
  }
}

TEST(Evolve, PreservesTraceAndHermiticity) {
  std::mt19937_64 rng(3);
  const SpectralData spec = decompose(random_bias_ring(6, rng));
  const DephasingRates rates = random_rates(6, 1.0, rng);
  for (double t : {0.3, 2.0, 40.0}) {
    const Eigen::MatrixXcd rho = evolve(spec, DensityMatrix::pure(6, 2), t, rates).matrix();
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
    EXPECT_NEAR(rho.trace().imag(), 0.0, 1e-12);
    EXPECT_LT((rho - rho.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Readout, FastPathMatchesEvolve) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + trial % 4;
    const SpectralData spec = decompose(random_bias_ring(n, rng));
    const DephasingRates rates = random_rates(n, 0.7, rng);
    const TransferSpec t{1, 2, 1.0 + trial, 0.0};
    const Eigen::MatrixXcd fast = readout_state(spec, t, rates).matrix();
    const Eigen::MatrixXcd slow = evolve(spec, DensityMatrix::pure(n, 1), t.read_time, rates).matrix();
    EXPECT_LT((fast - slow).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(instant_fidelity(spec, t, rates), slow(1, 1).real(), 1e-12);
  }
}

TEST(Window, MatchesSimpsonQuadrature) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 3 + trial % 3;
    const SpectralData spec = decompose(random_bias_ring(n, rng));
    const DephasingRates rates = random_rates(n, 0.4, rng);
    const TransferSpec t{1, n, 4.0, 0.25 + 0.5 * trial};
    const DensityMatrix rho0 = DensityMatrix::pure(n, 1);
    for (const OptionalRates& r : {OptionalRates{}, OptionalRates{rates}}) {
      const double expected =
          oracle::simpson([&](double s) { return evolve(spec, rho0, s, r).population(n); },
                          t.read_time - t.window_half_width, t.read_time + t.window_half_width, 4000) /
          (2 * t.window_half_width);
      EXPECT_NEAR(window_fidelity(spec, t, r), expected, 1e-10);
      EXPECT_NEAR(transfer_fidelity(spec, t, r), expected, 1e-10);
      EXPECT_NEAR(window_average(spec, rho0, t.read_time, t.window_half_width, r).population(n),
                  expected, 1e-10);
    }
  }
}

TEST(Window, NarrowWindowApproachesInstant) {
  std::mt19937_64 rng(6);
  const SpectralData spec = decompose(random_bias_ring(4, rng));
  const double instant = instant_fidelity(spec, {1, 3, 2.5, 0.0});
  EXPECT_NEAR(window_fidelity(spec, {1, 3, 2.5, 1e-6}), instant, 1e-10);
}

TEST(Window, BlockFactorIsContinuousAcrossSeriesSwitch) {
  const double omega = 2.0;
  const double gamma = -0.3;
  const cplx z(gamma, -omega);
  for (double dT : {0.99e-3 / std::abs(z), 1.01e-3 / std::abs(z), 0.1, 1e-8}) {
    const cplx x = z * dT;
    const cplx direct = std::exp(z * 3.0) * std::sinh(x) / x;
    EXPECT_LT(std::abs(block_factor(omega, gamma, 3.0, dT) - direct), 1e-14) << dT;
  }
  EXPECT_EQ(block_factor(0.0, 0.0, 3.0, 0.5), cplx(1.0, 0.0));
  EXPECT_LT(std::abs(block_factor(omega, gamma, 3.0, 0.0) - std::exp(z * 3.0)), 1e-15);
}

TEST(LongTime, SteadyStateMatchesAverageAndLateReadout) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + trial % 4;
    const SpectralData spec = decompose(random_bias_ring(n, rng));
    const TransferSpec t{1, 2, 0.0, 0.0};
    const double average = longterm_average_fidelity(spec, t);
    EXPECT_NEAR(steady_state(spec, DensityMatrix::pure(n, 1)).population(2), average, 1e-12);
    const DephasingRates rates = uniform_rates(n, 0.2 + 0.1 * trial);
    const TransferSpec late{1, 2, 50.0 / rates.slowest_rate(), 0.0};
    EXPECT_NEAR(instant_fidelity(spec, late, rates), average, 1e-6);
  }
}

TEST(LongTime, CoherentTimeAverageConverges) {
  std::mt19937_64 rng(8);
  const SpectralData spec = decompose(random_bias_ring(4, rng));
  const DensityMatrix rho0 = DensityMatrix::pure(4, 1);
  const double horizon = 400.0;
  const double mean =
      oracle::simpson([&](double s) { return evolve(spec, rho0, s).population(2); }, 0.0, horizon,
                      200000) /
      horizon;
  EXPECT_NEAR(mean, longterm_average_fidelity(spec, {1, 2, 0.0, 0.0}), 2e-2);
}

TEST(LongTime, RingThreeOverlaps) {
  const SpectralData spec =
      decompose(reduced_hamiltonian(SpinNetwork::build(Topology::ring, 3, 1.0), BiasField::zeros(3)));
  const TransferSpec t{1, 2, 0.0, 0.0};
  const Eigen::VectorXd y = overlap_vector(spec, 1, 2);
  EXPECT_NEAR(y(0), -1.0 / 3.0, 1e-14);
  EXPECT_NEAR(y(1), 1.0 / 3.0, 1e-14);
  const OverlapNorms norms = overlap_norms(spec, t);
  EXPECT_NEAR(norms.l2_sq, 2.0 / 9.0, 1e-14);
  EXPECT_NEAR(norms.l1, 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(steady_state(spec, DensityMatrix::pure(3, 1)).population(2), 2.0 / 9.0, 1e-14);
  for (double time = 0.0; time < 20.0; time += 0.37) {
    EXPECT_LE(instant_fidelity(spec, {1, 2, time, 0.0}), norms.l1 * norms.l1 + 1e-12);
  }
}

TEST(LongTime, CoherentBoundHoldsOnRandomRings) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const SpectralData spec = decompose(random_bias_ring(5, rng));
    const double l1 = overlap_norms(spec, {1, 2, 0.0, 0.0}).l1;
    for (double time : {0.5, 3.0, 11.0, 29.0}) {
      EXPECT_LE(instant_fidelity(spec, {1, 2, time, 0.0}), l1 * l1 + 1e-12);
    }
  }
}

TEST(Validation, DensityMatrix) {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(2, 2);
  rho(0, 0) = 1.0;
  EXPECT_NO_THROW(DensityMatrix::from_matrix(rho));
  rho(0, 1) = cplx(0.1, 0.0);
  EXPECT_THROW(DensityMatrix::from_matrix(rho), DataError);
  rho(1, 0) = cplx(0.1, 0.0);
  EXPECT_THROW(DensityMatrix::from_matrix(rho), DataError);  // negative eigenvalue
  EXPECT_THROW(DensityMatrix::from_matrix(Eigen::MatrixXcd::Identity(2, 2)), DataError);
  EXPECT_THROW(DensityMatrix::pure(3, 4), DataError);
}

TEST(Validation, RatesAndTransfer) {
  EXPECT_THROW(DephasingRates((Eigen::MatrixXd(2, 2) << 0, 1, 1, 0).finished()), DataError);
  EXPECT_THROW(DephasingRates((Eigen::MatrixXd(2, 2) << 0, -1, -2, 0).finished()), DataError);
  EXPECT_THROW(DephasingRates((Eigen::MatrixXd(2, 2) << -1, -1, -1, 0).finished()), DataError);
  EXPECT_DOUBLE_EQ(DephasingRates::none(3).slowest_rate(), 0.0);

  EXPECT_THROW((TransferSpec{0, 2, 1.0, 0.0}.validate(3)), DataError);
  EXPECT_THROW((TransferSpec{1, 4, 1.0, 0.0}.validate(3)), DataError);
  EXPECT_THROW((TransferSpec{1, 2, -1.0, 0.0}.validate(3)), DataError);
  EXPECT_THROW((TransferSpec{1, 2, 1.0, 2.0}.validate(3)), DataError);
  EXPECT_NO_THROW((TransferSpec{1, 2, 2.0, 2.0}.validate(3)));

  const SpectralData spec = decompose(two_level());
  EXPECT_THROW(instant_fidelity(spec, {1, 2, 1.0, 0.0}, DephasingRates::none(3)), DataError);
}

}  // namespace
}  // namespace spinshape
