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

#include "spinshape/dephasing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spinshape/errors.hpp"
#include "spinshape/parallel.hpp"

namespace spinshape {

namespace {

// Orthonormal Helmert basis of the sum-zero subspace: column j is
// (1, ..., 1, -(j + 1), 0, ...) / sqrt((j + 1)(j + 2)).
Eigen::MatrixXd sum_zero_basis(int dim) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(dim, dim - 1);
  for (int j = 0; j < dim - 1; ++j) {
    const double m = j + 1;
    const double scale = 1.0 / std::sqrt(m * (m + 1.0));
    p.col(j).head(j + 1).setConstant(scale);
    p(j + 1, j) = -m * scale;
  }
  return p;
}

Eigen::MatrixXd symmetric_extension(const Eigen::MatrixXd& raw) {
  const Eigen::Index n = raw.rows();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < k; ++l) g(k, l) = g(l, k) = raw(k, l);
  }
  return g;
}

Eigen::MatrixXd strict_lower(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  out.triangularView<Eigen::StrictlyLower>() = m.triangularView<Eigen::StrictlyLower>();
  return out;
}

}  // namespace

PhysicalityCertificate is_physical(const Eigen::MatrixXd& raw) {
  if (raw.rows() != raw.cols() || raw.rows() < 1) throw DataError("rate matrix must be square");
  PhysicalityCertificate cert;
  const int dim = static_cast<int>(raw.rows());
  if (dim == 1) {
    cert.ok = true;
    return cert;
  }
  const Eigen::MatrixXd p = sum_zero_basis(dim);
  const Eigen::MatrixXd reduced = p.transpose() * symmetric_extension(raw) * p;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(reduced);
  const Eigen::Index top = solver.eigenvalues().size() - 1;
  cert.max_eigenvalue = solver.eigenvalues()(top);
  cert.ok = cert.max_eigenvalue <= kPhysicalityTolerance;
  if (!cert.ok) {
    Eigen::VectorXd x = p * solver.eigenvectors().col(top);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (std::abs(x(i)) > 1e-12) {
        if (x(i) < 0.0) x = -x;
        break;
      }
    }
    cert.witness = x.normalized();
  }
  return cert;
}

DephasingProcess::DephasingProcess(Eigen::MatrixXd lower, ProcessOrigin origin)
    : lower_(strict_lower(lower)), origin_(origin) {
  if (lower.rows() != lower.cols() || lower.rows() < 1) {
    throw DataError("dephasing matrix must be square");
  }
  if (!lower_.allFinite()) throw DataError("dephasing rates must be finite");
  if (lower_.minCoeff() < 0.0) throw DataError("dephasing rate magnitudes must be >= 0");
  certificate_ = is_physical(lower_);
}

DephasingProcess DephasingProcess::from_packed(int dim, const std::vector<double>& packed,
                                               ProcessOrigin origin) {
  if (dim < 1) throw DataError("dephasing dimension must be >= 1");
  if (packed.size() != static_cast<std::size_t>(dim) * (dim - 1) / 2) {
    throw DataError("packed rate count does not match dimension " + std::to_string(dim));
  }
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(dim, dim);
  std::size_t i = 0;
  for (int k = 1; k < dim; ++k) {
    for (int l = 0; l < k; ++l) lower(k, l) = packed[i++];
  }
  return DephasingProcess(std::move(lower), origin);
}

double DephasingProcess::l1_norm() const { return lower_.cwiseAbs().sum(); }

std::vector<double> DephasingProcess::packed() const {
  std::vector<double> out;
  for (int k = 1; k < dim(); ++k) {
    for (int l = 0; l < k; ++l) out.push_back(lower_(k, l));
  }
  return out;
}

DephasingRates DephasingProcess::rates(double delta) const {
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw DataError("dephasing strength must be >= 0");
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(dim(), dim());
  for (int k = 0; k < dim(); ++k) {
    for (int l = 0; l < k; ++l) gamma(k, l) = gamma(l, k) = -delta * lower_(k, l);
  }
  return DephasingRates(std::move(gamma));
}

DephasingProcess from_operator(const Eigen::VectorXd& c) {
  if (c.size() < 1) throw DataError("dephasing operator needs at least one eigenvalue");
  if (!c.allFinite()) throw DataError("dephasing operator eigenvalues must be finite");
  const Eigen::Index n = c.size();
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < k; ++l) {
      const double diff = c(k) - c(l);
      lower(k, l) = 0.5 * diff * diff;
    }
  }
  return DephasingProcess(std::move(lower), {ProcessSource::from_operator, 0, 0});
}

Eigen::MatrixXd sample_candidate(int dim, Engine& engine) {
  if (dim < 2) throw DataError("dephasing candidates need dim >= 2");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) {
    for (int l = 0; l < k; ++l) m(k, l) = uniform01(engine);
  }
  return m;
}

DephasingProcess normalize(const Eigen::MatrixXd& raw, ProcessOrigin origin) {
  const Eigen::MatrixXd lower = strict_lower(raw);
  const double total = lower.cwiseAbs().sum();
  if (total == 0.0) throw DataError("cannot normalize an all-zero dephasing matrix");
  return DephasingProcess(lower.cwiseAbs() / total, origin);
}

DephasingProcess normalize(const DephasingProcess& process) {
  if (process.normalized()) return process;
  return normalize(process.lower(), process.origin());
}

Ensemble sample_ensemble(int dim, int count, std::uint64_t seed, const SampleOptions& options) {
  if (dim < 2) throw DataError("dephasing ensembles need dim >= 2");
  if (count < 1) throw DataError("ensemble count must be >= 1");

  Ensemble ensemble;
  ensemble.dim = dim;
  ensemble.seed = seed;
  ensemble.processes.reserve(static_cast<std::size_t>(count));

  const std::uint64_t batch = std::max<std::uint64_t>(256, 4ULL * static_cast<std::uint64_t>(count));
  std::uint64_t next = 0;
  while (ensemble.count() < count && next < options.candidate_budget) {
    const std::uint64_t size = std::min(batch, options.candidate_budget - next);
    std::vector<Eigen::MatrixXd> candidates(size);
    std::vector<char> accepted(size, 0);
    parallel_for(size, options.jobs, [&](std::size_t i) {
      Engine engine = make_engine(seed, "dephasing-candidate", next + i);
      candidates[i] = sample_candidate(dim, engine);
      accepted[i] = is_physical(candidates[i]).ok ? 1 : 0;
    });
    for (std::uint64_t i = 0; i < size && ensemble.count() < count; ++i) {
      ensemble.candidates_drawn = next + i + 1;
      if (accepted[i]) {
        ensemble.processes.push_back(
            normalize(candidates[i], {ProcessSource::sampled, seed, next + i}));
      }
    }
    next += size;
  }
  if (ensemble.count() < count) {
    throw SamplingBudgetError("collected " + std::to_string(ensemble.count()) + " of " +
                              std::to_string(count) + " physical processes within " +
                              std::to_string(options.candidate_budget) + " candidates");
  }
  ensemble.acceptance_rate =
      static_cast<double>(ensemble.count()) / static_cast<double>(ensemble.candidates_drawn);
  return ensemble;
}

}  // namespace spinshape
