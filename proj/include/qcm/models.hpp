// Copyright 2026 The QCM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qcm/pauli.hpp"
#include "qcm/state.hpp"

namespace qcm {

enum class LatticeKind { Chain, HeavyHoneycomb, Square, EdgeList };

std::string to_string(LatticeKind kind);
LatticeKind parse_lattice_kind(std::string_view name);

using Edge = std::pair<std::size_t, std::size_t>;

/**
 * Problem graph over q qubits. Edges are stored with i < j, without
 * duplicates, in a deterministic order fixed by the constructor.
 *
 * dims: chain {q}; square {rows, cols}; heavy-honeycomb {rows, cols} of
 * hexagonal cells; edge list {q}.
 */
struct LatticeGraph {
  LatticeKind kind = LatticeKind::Chain;
  std::vector<std::size_t> dims;
  std::size_t num_qubits = 0;
  std::vector<Edge> edges;
};

/// Builds one of the lattice families. Square lattices use snake
/// (boustrophedon) row numbering so consecutive indices are lattice
/// neighbours and index parity is the checkerboard colouring.
LatticeGraph build_lattice(LatticeKind kind, std::span<const std::size_t> dims);

/// Validates and canonicalizes an explicit edge list.
LatticeGraph graph_from_edges(std::size_t num_qubits, std::vector<Edge> edges);

/// Chooses dimensions giving exactly q vertices: square picks the most square
/// rows x cols factorization with rows >= 2; heavy-honeycomb searches cell
/// grids. Throws std::invalid_argument when the family cannot reach q.
LatticeGraph lattice_for_qubits(LatticeKind kind, std::size_t num_qubits);

struct EdgeCoupling {
  double jx = 0.0;
  double jy = 0.0;
  double jz = 0.0;

  friend bool operator==(const EdgeCoupling&, const EdgeCoupling&) = default;
};

/// One coupling triple per graph edge, aligned with LatticeGraph::edges.
using CouplingSet = std::vector<EdgeCoupling>;

CouplingSet uniform_couplings(const LatticeGraph& graph, double j = 1.0);

/// Each of jx, jy, jz drawn uniformly from {0.000, 0.001, ..., 0.999} with a
/// counter-based stream keyed by `seed`.
CouplingSet sample_couplings(const LatticeGraph& graph, std::uint64_t seed);

/// Hex digest of the couplings at three-decimal resolution.
std::string coupling_digest(const CouplingSet& couplings);

/// H = (1/q) sum_edges (jx XiXj + jy YiYj + jz ZiZj), zero weights dropped.
WeightedPauliSum build_hamiltonian(const LatticeGraph& graph,
                                   const CouplingSet& couplings);

/// Single-parameter trial state over a 1D qubit array: qubits are paired
/// (2k, 2k+1) and an odd final qubit stays in |0>.
struct TrialStateSpec {
  std::size_t num_qubits = 0;
  double theta = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::optional<std::size_t> unpaired;
};

TrialStateSpec chain_trial_spec(std::size_t num_qubits, double theta);

/// Per pair (a, b): RY(theta) on b, CNOT b -> a, X on a, giving
/// cos(theta/2)|1_a 0_b> + sin(theta/2)|0_a 1_b>. At theta = pi this is the
/// Neel string 0101...
PairProductState trial_state(const TrialStateSpec& spec);

}  // namespace qcm
