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

#include <optional>
#include <string>
#include <vector>

namespace spinshape {

// Eigenvalues of a real symmetric matrix grouped into clusters, with the
// orthogonal projector onto each cluster's eigenspace.
struct SpectralData {
  Eigen::VectorXd eigenvalues;            // one per cluster, ascending
  std::vector<Eigen::MatrixXd> projectors;
  std::vector<int> multiplicities;
  std::vector<Eigen::MatrixXd> bases;     // orthonormal columns spanning each cluster
  double cluster_tol = 0.0;

  int dimension() const noexcept { return projectors.empty() ? 0 : static_cast<int>(projectors.front().rows()); }
  int cluster_count() const noexcept { return static_cast<int>(eigenvalues.size()); }
  bool is_nondegenerate() const noexcept { return cluster_count() == dimension(); }

  // Unit eigenvector of a simple cluster; throws DegeneracyError otherwise.
  Eigen::VectorXd eigenvector(int k) const;
};

double default_cluster_tol(const Eigen::MatrixXd& h);

// Eigenvalues closer than cluster_tol (adjacent gaps after sorting) share a
// cluster. Eigenvectors use the sign convention: largest-magnitude component
// positive.
SpectralData decompose(const Eigen::MatrixXd& h, std::optional<double> cluster_tol = std::nullopt);

// Symmetric perturbation direction, Frobenius-normalized unless built raw.
class PerturbationStructure {
 public:
  static PerturbationStructure bias(int n_spins, int node);
  static PerturbationStructure coupling(int n_spins, int m, int n);
  static PerturbationStructure identity(int n_spins);
  static PerturbationStructure from_matrix(Eigen::MatrixXd matrix, std::string label,
                                           bool raw = false);
  // "bias:3", "coupling:1-2" or "identity".
  static PerturbationStructure parse(const std::string& spec, int n_spins);
  // Every bias and nearest-neighbour coupling direction of a network size.
  static std::vector<PerturbationStructure> all_local(int n_spins,
                                                      const std::vector<std::pair<int, int>>& edges);

  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  const std::string& label() const noexcept { return label_; }

 private:
  PerturbationStructure(Eigen::MatrixXd matrix, std::string label)
      : matrix_(std::move(matrix)), label_(std::move(label)) {}

  Eigen::MatrixXd matrix_;
  std::string label_;
};

// d v_k / d delta for H + delta S at delta = 0, first-order perturbation theory.
Eigen::VectorXd eigvec_derivative(const SpectralData& spec, const PerturbationStructure& s, int k);

// d Pi_k / d delta = v' v^T + v v'^T for a one-dimensional eigenspace.
Eigen::MatrixXd projector_derivative(const SpectralData& spec, const PerturbationStructure& s,
                                     int k);

}  // namespace spinshape
