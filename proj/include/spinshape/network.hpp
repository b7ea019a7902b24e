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
#include <Eigen/SparseCore>

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace spinshape {

enum class Topology { chain, ring, edges };

std::string_view to_string(Topology topology);
Topology parse_topology(std::string_view name);

// Edge between 1-based nodes m < n with coupling strength J.
struct Coupling {
  int m = 0;
  int n = 0;
  double J = 0.0;

  friend bool operator==(const Coupling&, const Coupling&) = default;
};

// Either one uniform strength for every topology edge, or explicit per-edge
// values (required for Topology::edges).
using CouplingValues = std::variant<double, std::vector<Coupling>>;

class SpinNetwork {
 public:
  // Validates and canonicalizes couplings: edges stored with m < n, sorted,
  // duplicates merged when equal and rejected when not.
  static SpinNetwork build(Topology topology, int n_spins,
                           const CouplingValues& couplings, double kappa = 0.0);

  int size() const noexcept { return n_spins_; }
  Topology topology() const noexcept { return topology_; }
  double kappa() const noexcept { return kappa_; }
  const std::vector<Coupling>& couplings() const noexcept { return couplings_; }

  // J_mn for 1-based nodes; 0 when the pair is not an edge.
  double coupling(int m, int n) const;

  // Uniform value when every edge carries the same J.
  std::optional<double> uniform_coupling() const;

 private:
  SpinNetwork(Topology topology, int n_spins, std::vector<Coupling> couplings,
              double kappa)
      : topology_(topology), n_spins_(n_spins),
        couplings_(std::move(couplings)), kappa_(kappa) {}

  Topology topology_;
  int n_spins_;
  std::vector<Coupling> couplings_;
  double kappa_;
};

// Static bias fields D_n, one per spin.
class BiasField {
 public:
  BiasField() = default;
  explicit BiasField(Eigen::VectorXd values);
  static BiasField zeros(int n) { return BiasField(Eigen::VectorXd::Zero(n)); }

  const Eigen::VectorXd& values() const noexcept { return d_; }
  int size() const noexcept { return static_cast<int>(d_.size()); }
  double operator[](int i) const { return d_(i); }

 private:
  Eigen::VectorXd d_;
};

// Single-excitation Hamiltonian: D on the diagonal, J_mn off the diagonal.
Eigen::MatrixXd reduced_hamiltonian(const SpinNetwork& net, const BiasField& bias);

using SparseComplexMatrix = Eigen::SparseMatrix<std::complex<double>>;

inline constexpr int kMaxFullSpaceSpins = 12;

// H + D on the full 2^N space, assembled term by term from Pauli strings.
// Spin 1 is the leftmost tensor factor; basis index bit (N - n) set means
// spin n is in the Z = -1 (ground) state, so index 0 is all-excited.
SparseComplexMatrix full_space_hamiltonian(const SpinNetwork& net,
                                           const BiasField& bias);

// S = (1/2) sum_n (I + Z_n): diagonal, counts excited spins.
SparseComplexMatrix excitation_number_operator(int n_spins);

// Basis index of the state with only spin `node` (1-based) excited.
long single_excitation_index(int n_spins, int node);

// Largest |entry| of [H, S].
double excitation_commutator_norm(const SparseComplexMatrix& h, int n_spins);

struct SubspaceReductionReport {
  bool commutes_with_S = false;
  double commutator_norm = 0.0;
  // Projected off-diagonal entries divided by the reduced J_mn.
  double proportionality_factor = 0.0;
  // Projected diagonal = diagonal_factor * D_n + diagonal_shift.
  double diagonal_factor = 0.0;
  double diagonal_shift = 0.0;
  // max |P - (factor * H_D + shift * I)| with the diagonal rescaled the same way.
  double residual = 0.0;
};

inline constexpr int kMaxVerifySpins = 10;

SubspaceReductionReport verify_subspace_reduction(const SpinNetwork& net,
                                                  const BiasField& bias);

}  // namespace spinshape
