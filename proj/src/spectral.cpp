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

#include "spinshape/spectral.hpp"

#include <cmath>
#include <regex>

#include "spinshape/errors.hpp"

namespace spinshape {

Eigen::VectorXd SpectralData::eigenvector(int k) const {
  if (k < 0 || k >= cluster_count()) throw DataError("eigenspace index out of range");
  if (multiplicities[k] != 1) {
    throw DegeneracyError("eigenspace " + std::to_string(k) + " has multiplicity " +
                          std::to_string(multiplicities[k]));
  }
  return bases[k].col(0);
}

double default_cluster_tol(const Eigen::MatrixXd& h) {
  return 1e-8 * (1.0 + h.cwiseAbs().maxCoeff());
}

namespace {

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index largest = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > std::abs(v(largest))) largest = i;
  }
  if (v(largest) < 0.0) v = -v;
}

}  // namespace

SpectralData decompose(const Eigen::MatrixXd& h, std::optional<double> cluster_tol) {
  if (h.rows() != h.cols() || h.rows() == 0) throw DataError("decompose: matrix must be square");
  if (!h.allFinite()) throw DataError("decompose: matrix must be finite");
  const double scale = 1.0 + h.cwiseAbs().maxCoeff();
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DataError("decompose: matrix is not symmetric");
  }
  const double tol = cluster_tol.value_or(1e-8 * scale);
  if (tol < 0.0) throw DataError("decompose: cluster tolerance must be non-negative");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const Eigen::VectorXd& values = solver.eigenvalues();  // ascending
  Eigen::MatrixXd vectors = solver.eigenvectors();
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) fix_sign(vectors.col(j));

  SpectralData out;
  out.cluster_tol = tol;
  std::vector<double> centers;
  const Eigen::Index n = values.size();
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && values(end) - values(end - 1) <= tol) ++end;
    const Eigen::Index size = end - start;
    Eigen::MatrixXd basis = vectors.middleCols(start, size);
    centers.push_back(values.segment(start, size).mean());
    out.projectors.push_back(basis * basis.transpose());
    out.multiplicities.push_back(static_cast<int>(size));
    out.bases.push_back(std::move(basis));
    start = end;
  }
  out.eigenvalues = Eigen::Map<Eigen::VectorXd>(centers.data(), static_cast<Eigen::Index>(centers.size()));
  return out;
}

PerturbationStructure PerturbationStructure::bias(int n_spins, int node) {
  if (node < 1 || node > n_spins) throw DataError("bias perturbation node out of range");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_spins, n_spins);
  m(node - 1, node - 1) = 1.0;
  return {std::move(m), "bias-" + std::to_string(node)};
}

PerturbationStructure PerturbationStructure::coupling(int n_spins, int a, int b) {
  if (a < 1 || a > n_spins || b < 1 || b > n_spins || a == b) {
    throw DataError("coupling perturbation edge out of range");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_spins, n_spins);
  m(a - 1, b - 1) = m(b - 1, a - 1) = 1.0 / std::sqrt(2.0);
  return {std::move(m), "coupling-" + std::to_string(std::min(a, b)) + std::to_string(std::max(a, b))};
}

PerturbationStructure PerturbationStructure::identity(int n_spins) {
  return from_matrix(Eigen::MatrixXd::Identity(n_spins, n_spins), "identity");
}

PerturbationStructure PerturbationStructure::from_matrix(Eigen::MatrixXd matrix, std::string label,
                                                         bool raw) {
  if (matrix.rows() != matrix.cols()) throw DataError("perturbation structure must be square");
  if (!matrix.allFinite()) throw DataError("perturbation structure must be finite");
  if (matrix != matrix.transpose()) throw DataError("perturbation structure must be symmetric");
  if (!raw) {
    const double norm = matrix.norm();
    if (norm == 0.0) throw DataError("perturbation structure is zero");
    matrix /= norm;
  }
  return {std::move(matrix), std::move(label)};
}

PerturbationStructure PerturbationStructure::parse(const std::string& spec, int n_spins) {
  static const std::regex bias_re(R"(bias:(\d+))");
  static const std::regex coupling_re(R"(coupling:(\d+)-(\d+))");
  std::smatch match;
  if (std::regex_match(spec, match, bias_re)) return bias(n_spins, std::stoi(match[1]));
  if (std::regex_match(spec, match, coupling_re)) {
    return coupling(n_spins, std::stoi(match[1]), std::stoi(match[2]));
  }
  if (spec == "identity") return identity(n_spins);
  throw DataError("unrecognised perturbation structure '" + spec + "'");
}

std::vector<PerturbationStructure> PerturbationStructure::all_local(
    int n_spins, const std::vector<std::pair<int, int>>& edges) {
  std::vector<PerturbationStructure> out;
  for (int node = 1; node <= n_spins; ++node) out.push_back(bias(n_spins, node));
  for (auto [a, b] : edges) out.push_back(coupling(n_spins, a, b));
  return out;
}

namespace {

// Requires only cluster k to be simple: sum_j Pi_j S v_k / (lambda_k - lambda_j)
// is independent of the basis chosen inside degenerate clusters j.
Eigen::VectorXd simple_eigvec_derivative(const SpectralData& spec, const PerturbationStructure& s,
                                         int k) {
  const int n = spec.dimension();
  if (s.matrix().rows() != n) throw DataError("perturbation structure dimension mismatch");
  const Eigen::VectorXd vk = spec.eigenvector(k);

  // Removing a multiple of the identity leaves eigenvectors unchanged; doing
  // it here makes uniform shifts contribute exactly zero.
  Eigen::MatrixXd shifted = s.matrix();
  shifted.diagonal().array() -= s.matrix()(0, 0);
  const Eigen::VectorXd s_vk = shifted * vk;

  Eigen::VectorXd dv = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < spec.cluster_count(); ++j) {
    if (j == k) continue;
    const Eigen::VectorXd coefficients = spec.bases[j].transpose() * s_vk;
    if (coefficients.isZero(0.0)) continue;
    dv += spec.bases[j] * (coefficients / (spec.eigenvalues(k) - spec.eigenvalues(j)));
  }
  return dv;
}

}  // namespace

Eigen::VectorXd eigvec_derivative(const SpectralData& spec, const PerturbationStructure& s, int k) {
  if (!spec.is_nondegenerate()) {
    throw DegeneracyError("eigenvector derivatives need a non-degenerate spectrum");
  }
  return simple_eigvec_derivative(spec, s, k);
}

Eigen::MatrixXd projector_derivative(const SpectralData& spec, const PerturbationStructure& s,
                                     int k) {
  const Eigen::VectorXd v = spec.eigenvector(k);
  const Eigen::VectorXd dv = simple_eigvec_derivative(spec, s, k);
  return dv * v.transpose() + v * dv.transpose();
}

}  // namespace spinshape
