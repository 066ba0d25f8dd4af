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

#include "qcm/state.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "qcm/errors.hpp"

namespace qcm {

cplx block_expectation(const cplx* amplitudes, std::size_t dim, unsigned x,
                       unsigned z) {
  static constexpr cplx kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cplx phase = kPowers[std::popcount(x & z) & 3];
  cplx acc = 0;
  for (unsigned s = 0; s < dim; ++s) {
    const double sign = (std::popcount(s & z) & 1) ? -1.0 : 1.0;
    acc += std::conj(amplitudes[s ^ x]) * amplitudes[s] * sign;
  }
  return acc * phase;
}

PairProductState::PairProductState(std::size_t num_qubits, std::vector<Block> blocks)
    : num_qubits_(num_qubits), blocks_(std::move(blocks)) {
  if (num_qubits > kMaxQubits) {
    throw std::invalid_argument("product state register too large");
  }
  std::uint64_t covered = 0;
  for (auto& b : blocks_) {
    if (b.qubits.empty() || b.qubits.size() > 2) {
      throw std::invalid_argument("state blocks hold one or two qubits");
    }
    for (std::size_t m : b.qubits) {
      if (m >= num_qubits) throw std::invalid_argument("block qubit out of range");
      const std::uint64_t bit = std::uint64_t{1} << m;
      if (covered & bit) throw std::invalid_argument("qubit covered by two blocks");
      covered |= bit;
    }
    const std::size_t dim = std::size_t{1} << b.qubits.size();
    double norm = 0;
    for (std::size_t s = 0; s < dim; ++s) norm += std::norm(b.amplitudes[s]);
    if (!(norm > 0)) throw std::invalid_argument("zero-norm state block");
    const double scale = 1.0 / std::sqrt(norm);
    for (std::size_t s = 0; s < dim; ++s) b.amplitudes[s] *= scale;
    for (std::size_t s = dim; s < 4; ++s) b.amplitudes[s] = 0;
  }
  const std::uint64_t full =
      num_qubits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << num_qubits) - 1;
  if (covered != full) throw std::invalid_argument("blocks must cover every qubit");

  tables_.reserve(blocks_.size());
  for (const auto& b : blocks_) {
    const unsigned k = static_cast<unsigned>(b.qubits.size());
    const unsigned dim = 1u << k;
    std::array<double, 16> table{};
    for (unsigned x = 0; x < dim; ++x) {
      for (unsigned z = 0; z < dim; ++z) {
        table[x | (z << k)] = block_expectation(b.amplitudes.data(), dim, x, z).real();
      }
    }
    tables_.push_back(table);
  }
}

double PairProductState::expectation(const PauliString& p) const {
  if (p.num_qubits() != num_qubits_) {
    throw QubitCountMismatch(num_qubits_, p.num_qubits());
  }
  const std::uint64_t px = p.x_mask();
  const std::uint64_t pz = p.z_mask();
  double value = 1.0;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const auto& qubits = blocks_[i].qubits;
    const unsigned k = static_cast<unsigned>(qubits.size());
    unsigned x = 0;
    unsigned z = 0;
    for (unsigned t = 0; t < k; ++t) {
      x |= static_cast<unsigned>((px >> qubits[t]) & 1) << t;
      z |= static_cast<unsigned>((pz >> qubits[t]) & 1) << t;
    }
    value *= tables_[i][x | (z << k)];
    if (value == 0.0) return 0.0;
  }
  return value;
}

std::vector<cplx> PairProductState::to_statevector() const {
  if (num_qubits_ > 30) {
    throw GuardError(fmt::format("statevector of {} qubits exceeds the 30-qubit guard",
                                 num_qubits_));
  }
  std::vector<cplx> psi(std::size_t{1} << num_qubits_, cplx{1, 0});
  for (std::size_t index = 0; index < psi.size(); ++index) {
    cplx amp = 1;
    for (const auto& b : blocks_) {
      unsigned local = 0;
      for (unsigned t = 0; t < b.qubits.size(); ++t) {
        local |= static_cast<unsigned>((index >> b.qubits[t]) & 1) << t;
      }
      amp *= b.amplitudes[local];
      if (amp == cplx{0, 0}) break;
    }
    psi[index] = amp;
  }
  return psi;
}

}  // namespace qcm
