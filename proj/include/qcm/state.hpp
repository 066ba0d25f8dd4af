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

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "qcm/pauli.hpp"

namespace qcm {

using cplx = std::complex<double>;

/**
 * Product state over disjoint blocks of one or two qubits.
 *
 * A block's amplitude index has bit k set when qubit qubits[k] is |1>.
 * Each block is normalized and keeps a table of its 4^k Pauli expectations,
 * so a string's expectation is a product of table lookups.
 */
class PairProductState {
 public:
  struct Block {
    std::vector<std::size_t> qubits;  // size 1 or 2
    std::array<cplx, 4> amplitudes{};
  };

  PairProductState() = default;

  /// Blocks must cover qubits 0..num_qubits-1 exactly once; amplitudes are
  /// normalized on construction (zero blocks are rejected).
  PairProductState(std::size_t num_qubits, std::vector<Block> blocks);

  std::size_t num_qubits() const { return num_qubits_; }
  const std::vector<Block>& blocks() const { return blocks_; }

  /// <P> for a string on this register (real for Hermitian P).
  double expectation(const PauliString& p) const;

  /// Dense 2^q amplitudes, index bit m = qubit m. Guarded at 30 qubits.
  std::vector<cplx> to_statevector() const;

 private:
  std::size_t num_qubits_ = 0;
  std::vector<Block> blocks_;
  // Per block: expectation of each letter combination, indexed by the block's
  // (x bits | z bits << k) code.
  std::vector<std::array<double, 16>> tables_;
};

/// <psi|P|psi> for an amplitude block over `dim` basis states where P flips
/// bits `x` and carries phase bits `z` in block index space.
cplx block_expectation(const cplx* amplitudes, std::size_t dim, unsigned x,
                       unsigned z);

}  // namespace qcm
