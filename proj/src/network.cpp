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

#include "spinshape/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "spinshape/errors.hpp"

namespace spinshape {

std::string_view to_string(Topology topology) {
  switch (topology) {
    case Topology::chain: return "chain";
    case Topology::ring: return "ring";
    case Topology::edges: return "edges";
  }
  return "unknown";
}

Topology parse_topology(std::string_view name) {
  if (name == "chain") return Topology::chain;
  if (name == "ring") return Topology::ring;
  if (name == "edges") return Topology::edges;
  throw DataError("unknown topology '" + std::string(name) + "'");
}

namespace {

std::vector<std::pair<int, int>> topology_edges(Topology topology, int n) {
  std::vector<std::pair<int, int>> edges;
  for (int m = 1; m < n; ++m) edges.emplace_back(m, m + 1);
  // A 2-ring would repeat edge (1,2); it collapses onto the chain.
  if (topology == Topology::ring && n > 2) edges.emplace_back(1, n);
  return edges;
}

}  // namespace

SpinNetwork SpinNetwork::build(Topology topology, int n_spins,
                               const CouplingValues& couplings, double kappa) {
  if (n_spins < 2) throw DataError("a spin network needs at least 2 spins");
  if (!std::isfinite(kappa)) throw DataError("kappa must be finite");

  std::map<std::pair<int, int>, double> merged;
  auto add = [&](int m, int n, double J) {
    if (m < 1 || m > n_spins || n < 1 || n > n_spins) {
      throw DataError("edge (" + std::to_string(m) + "," + std::to_string(n) +
                      ") outside nodes 1.." + std::to_string(n_spins));
    }
    if (m == n) throw DataError("self-coupling at node " + std::to_string(m));
    if (!std::isfinite(J)) throw DataError("coupling strengths must be finite");
    const auto key = std::minmax(m, n);
    auto [it, inserted] = merged.emplace(key, J);
    if (!inserted && it->second != J) {
      throw DataError("non-symmetric couplings for edge (" + std::to_string(key.first) +
                      "," + std::to_string(key.second) + ")");
    }
  };

  if (const double* uniform = std::get_if<double>(&couplings)) {
    if (topology == Topology::edges) {
      throw DataError("edge-list networks need explicit per-edge couplings");
    }
    for (auto [m, n] : topology_edges(topology, n_spins)) add(m, n, *uniform);
  } else {
    for (const Coupling& c : std::get<std::vector<Coupling>>(couplings)) add(c.m, c.n, c.J);
    if (topology != Topology::edges) {
      const auto expected = topology_edges(topology, n_spins);
      if (merged.size() != expected.size()) {
        throw DataError("explicit couplings must list exactly the " +
                        std::string(to_string(topology)) + " edges");
      }
      for (auto edge : expected) {
        if (!merged.contains(edge)) {
          throw DataError("edge (" + std::to_string(edge.first) + "," +
                          std::to_string(edge.second) + ") not part of a " +
                          std::string(to_string(topology)));
        }
      }
    }
  }

  std::vector<Coupling> canonical;
  canonical.reserve(merged.size());
  for (const auto& [key, J] : merged) canonical.push_back({key.first, key.second, J});
  return SpinNetwork(topology, n_spins, std::move(canonical), kappa);
}

double SpinNetwork::coupling(int m, int n) const {
  const auto [a, b] = std::minmax(m, n);
  for (const Coupling& c : couplings_) {
    if (c.m == a && c.n == b) return c.J;
  }
  return 0.0;
}

std::optional<double> SpinNetwork::uniform_coupling() const {
  if (couplings_.empty()) return std::nullopt;
  const double J = couplings_.front().J;
  for (const Coupling& c : couplings_) {
    if (c.J != J) return std::nullopt;
  }
  return J;
}

BiasField::BiasField(Eigen::VectorXd values) : d_(std::move(values)) {
  if (!d_.allFinite()) throw DataError("bias fields must be finite");
}

Eigen::MatrixXd reduced_hamiltonian(const SpinNetwork& net, const BiasField& bias) {
  if (net.kappa() != 0.0) {
    throw UnsupportedCouplingError(
        "reduced single-excitation dynamics require XX coupling (kappa = 0)");
  }
  const int n = net.size();
  if (bias.size() != n) {
    throw DataError("bias length " + std::to_string(bias.size()) +
                    " does not match network size " + std::to_string(n));
  }
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  h.diagonal() = bias.values();
  for (const Coupling& c : net.couplings()) {
    h(c.m - 1, c.n - 1) = c.J;
    h(c.n - 1, c.m - 1) = c.J;
  }
  return h;
}

namespace {

using cplx = std::complex<double>;
using Triplet = Eigen::Triplet<cplx>;

// One Pauli factor per spin: 'I', 'X', 'Y' or 'Z'.
struct PauliString {
  std::vector<char> ops;
  cplx coefficient;
};

// Bit holding spin `node` (1-based); spin 1 is the most significant.
inline long spin_bit(int n_spins, int node) { return 1L << (n_spins - node); }

void append_action(const PauliString& term, int n_spins, std::vector<Triplet>& out) {
  const long dim = 1L << n_spins;
  for (long col = 0; col < dim; ++col) {
    long row = col;
    cplx amplitude = term.coefficient;
    for (int node = 1; node <= n_spins; ++node) {
      const long bit = spin_bit(n_spins, node);
      const bool ground = (col & bit) != 0;  // Z = -1
      switch (term.ops[node - 1]) {
        case 'X':
          row ^= bit;
          break;
        case 'Y':
          // Y|e> = j|g>, Y|g> = -j|e> with |e> the Z = +1 vector.
          row ^= bit;
          amplitude *= ground ? cplx(0, -1) : cplx(0, 1);
          break;
        case 'Z':
          if (ground) amplitude = -amplitude;
          break;
        default:
          break;
      }
    }
    out.emplace_back(row, col, amplitude);
  }
}

PauliString two_site(int n_spins, int m, int n, char op, double coefficient) {
  PauliString s{std::vector<char>(n_spins, 'I'), coefficient};
  s.ops[m - 1] = op;
  s.ops[n - 1] = op;
  return s;
}

PauliString one_site(int n_spins, int n, char op, double coefficient) {
  PauliString s{std::vector<char>(n_spins, 'I'), coefficient};
  s.ops[n - 1] = op;
  return s;
}

}  // namespace

SparseComplexMatrix full_space_hamiltonian(const SpinNetwork& net, const BiasField& bias) {
  const int n = net.size();
  if (n > kMaxFullSpaceSpins) {
    throw DataError("full-space Hamiltonian limited to " +
                    std::to_string(kMaxFullSpaceSpins) + " spins");
  }
  if (bias.size() != n) throw DataError("bias length does not match network size");

  std::vector<Triplet> triplets;
  for (const Coupling& c : net.couplings()) {
    append_action(two_site(n, c.m, c.n, 'X', c.J), n, triplets);
    append_action(two_site(n, c.m, c.n, 'Y', c.J), n, triplets);
    if (net.kappa() != 0.0) {
      append_action(two_site(n, c.m, c.n, 'Z', net.kappa() * c.J), n, triplets);
    }
  }
  for (int node = 1; node <= n; ++node) {
    if (bias[node - 1] != 0.0) append_action(one_site(n, node, 'Z', bias[node - 1]), n, triplets);
  }
  const long dim = 1L << n;
  SparseComplexMatrix h(dim, dim);
  h.setFromTriplets(triplets.begin(), triplets.end());
  h.prune(cplx(0.0, 0.0));
  return h;
}

SparseComplexMatrix excitation_number_operator(int n_spins) {
  const long dim = 1L << n_spins;
  std::vector<Triplet> triplets;
  triplets.reserve(dim);
  for (long i = 0; i < dim; ++i) {
    // Excited spins are the zero bits.
    const int excited = n_spins - __builtin_popcountl(static_cast<unsigned long>(i));
    if (excited != 0) triplets.emplace_back(i, i, static_cast<double>(excited));
  }
  SparseComplexMatrix s(dim, dim);
  s.setFromTriplets(triplets.begin(), triplets.end());
  return s;
}

long single_excitation_index(int n_spins, int node) {
  const long all_ground = (1L << n_spins) - 1;
  return all_ground ^ spin_bit(n_spins, node);
}

double excitation_commutator_norm(const SparseComplexMatrix& h, int n_spins) {
  const SparseComplexMatrix s = excitation_number_operator(n_spins);
  const SparseComplexMatrix commutator = SparseComplexMatrix(h * s) - SparseComplexMatrix(s * h);
  double norm = 0.0;
  for (int k = 0; k < commutator.outerSize(); ++k) {
    for (SparseComplexMatrix::InnerIterator it(commutator, k); it; ++it) {
      norm = std::max(norm, std::abs(it.value()));
    }
  }
  return norm;
}

SubspaceReductionReport verify_subspace_reduction(const SpinNetwork& net,
                                                  const BiasField& bias) {
  const int n = net.size();
  if (n > kMaxVerifySpins) {
    throw DataError("subspace verification limited to " + std::to_string(kMaxVerifySpins) +
                    " spins");
  }
  const Eigen::MatrixXd reduced = reduced_hamiltonian(net, bias);
  const SparseComplexMatrix full = full_space_hamiltonian(net, bias);

  SubspaceReductionReport report;
  report.commutator_norm = excitation_commutator_norm(full, n);
  report.commutes_with_S = report.commutator_norm <= 1e-12;

  const Eigen::MatrixXcd dense(full);
  Eigen::MatrixXd projected(n, n);
  for (int a = 1; a <= n; ++a) {
    for (int b = 1; b <= n; ++b) {
      projected(a - 1, b - 1) =
          dense(single_excitation_index(n, a), single_excitation_index(n, b)).real();
    }
  }

  double cross = 0.0;
  double norm_sq = 0.0;
  for (const Coupling& c : net.couplings()) {
    cross += projected(c.m - 1, c.n - 1) * c.J;
    norm_sq += c.J * c.J;
  }
  const Eigen::VectorXd d = bias.values();
  const Eigen::VectorXd p = projected.diagonal();
  const Eigen::VectorXd d_centered = d.array() - d.mean();
  const Eigen::VectorXd p_centered = p.array() - p.mean();
  const double d_spread = d_centered.squaredNorm();

  report.proportionality_factor = norm_sq > 0.0 ? cross / norm_sq : 0.0;
  report.diagonal_factor =
      d_spread > 0.0 ? d_centered.dot(p_centered) / d_spread : report.proportionality_factor;
  if (norm_sq == 0.0) report.proportionality_factor = report.diagonal_factor;
  report.diagonal_shift = p.mean() - report.diagonal_factor * d.mean();

  const Eigen::MatrixXd model =
      report.proportionality_factor * reduced +
      report.diagonal_shift * Eigen::MatrixXd::Identity(n, n);
  report.residual = (projected - model).cwiseAbs().maxCoeff();
  return report;
}

}  // namespace spinshape
