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

#include <cstdint>
#include <optional>
#include <vector>

#include "spinshape/dynamics.hpp"
#include "spinshape/rng.hpp"

namespace spinshape {

// Result of the realizability test for a pure-dephasing rate matrix.
struct PhysicalityCertificate {
  bool ok = false;
  // Largest eigenvalue of G restricted to the sum-zero subspace.
  double max_eigenvalue = 0.0;
  // Unit sum-zero vector with x^T G x > 0 when the test fails.
  std::optional<Eigen::VectorXd> witness;
};

inline constexpr double kPhysicalityTolerance = 1e-10;

// The symmetric zero-diagonal extension G of `raw` (only the strict lower
// triangle is read) must satisfy x^T G x <= 0 whenever sum(x) = 0. These are
// exactly the matrices gamma_kl = 1/2 sum_j (c_k^j - c_l^j)^2 generated by
// commuting Hermitian dephasing operators.
PhysicalityCertificate is_physical(const Eigen::MatrixXd& raw);

enum class ProcessSource { sampled, from_operator, explicit_rates };

struct ProcessOrigin {
  ProcessSource source = ProcessSource::explicit_rates;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
};

// Non-negative rate magnitudes on the strict lower triangle over eigenspace
// clusters. Applied at strength delta as gamma_kl = -delta * rate_kl.
class DephasingProcess {
 public:
  // Takes the strict lower triangle of `lower`; rejects negative entries.
  DephasingProcess(Eigen::MatrixXd lower, ProcessOrigin origin = {});
  // Row-major strict lower triangle: (2,1), (3,1), (3,2), (4,1), ...
  static DephasingProcess from_packed(int dim, const std::vector<double>& packed,
                                      ProcessOrigin origin = {});

  int dim() const noexcept { return static_cast<int>(lower_.rows()); }
  const Eigen::MatrixXd& lower() const noexcept { return lower_; }
  double rate(int k, int l) const { return k > l ? lower_(k, l) : lower_(l, k); }
  // Sum of the strict-lower magnitudes.
  double l1_norm() const;
  bool normalized() const { return std::abs(l1_norm() - 1.0) <= 1e-12; }
  const PhysicalityCertificate& certificate() const noexcept { return certificate_; }
  const ProcessOrigin& origin() const noexcept { return origin_; }

  std::vector<double> packed() const;
  DephasingRates rates(double delta) const;

 private:
  Eigen::MatrixXd lower_;
  PhysicalityCertificate certificate_;
  ProcessOrigin origin_;
};

// Rates 1/2 (c_k - c_l)^2 of the single dephasing operator V = sum_k c_k Pi_k.
// Not normalized.
DephasingProcess from_operator(const Eigen::VectorXd& c);

// dim x dim matrix with independent Uniform[0,1) entries on the strict lower
// triangle (row-major draw order), zeros elsewhere.
Eigen::MatrixXd sample_candidate(int dim, Engine& engine);

// Divides the strict lower triangle by its absolute sum.
DephasingProcess normalize(const Eigen::MatrixXd& raw, ProcessOrigin origin = {});
DephasingProcess normalize(const DephasingProcess& process);

struct Ensemble {
  int dim = 0;
  std::uint64_t seed = 0;
  std::uint64_t candidates_drawn = 0;
  double acceptance_rate = 0.0;
  std::vector<DephasingProcess> processes;

  int count() const noexcept { return static_cast<int>(processes.size()); }
};

struct SampleOptions {
  std::uint64_t candidate_budget = 10'000'000;
  int jobs = 1;
};

// Rejection sampling of physical candidates, normalized. Candidate i is drawn
// from a stream keyed by (seed, i) and candidates are accepted in index order,
// so the ensemble does not depend on jobs.
Ensemble sample_ensemble(int dim, int count, std::uint64_t seed, const SampleOptions& options = {});

}  // namespace spinshape
