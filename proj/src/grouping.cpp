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

#include "qcm/grouping.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qcm/errors.hpp"
#include "qcm/rng.hpp"

namespace qcm {

namespace {

// Label letter codes: bit 0 = x, bit 1 = z.
constexpr unsigned kCodeX = 1;

// Upper bound on (string, qubit) incidences held in the per-qubit candidate
// lists. Larger inputs are thinned by a fixed hash of the string index.
constexpr std::size_t kSampleEntries = 3'000'000;

inline unsigned letter_code(std::uint64_t x, std::uint64_t z, std::size_t m) {
  return static_cast<unsigned>(((x >> m) & 1) | (((z >> m) & 1) << 1));
}

// True when the string's letters agree with the label wherever both act.
inline bool fits(std::uint64_t x, std::uint64_t z, std::uint64_t lx,
                 std::uint64_t lz) {
  return (((x ^ lx) | (z ^ lz)) & (x | z) & (lx | lz)) == 0;
}

// True when the label fixes every letter of the string.
inline bool covers(std::uint64_t x, std::uint64_t z, std::uint64_t lx,
                   std::uint64_t lz) {
  return (((x ^ lx) | (z ^ lz)) & (x | z)) == 0;
}

class LabelBuilder {
 public:
  LabelBuilder(std::span<const PauliString> strings, std::size_t q)
      : q_(q), x_(strings.size()), z_(strings.size()), lists_(q) {
    for (std::size_t i = 0; i < strings.size(); ++i) {
      x_[i] = strings[i].x_mask();
      z_[i] = strings[i].z_mask();
      active_entries_ += std::popcount(x_[i] | z_[i]);
    }
    covered_.assign(strings.size(), 0);
    active_.resize(strings.size());
    std::iota(active_.begin(), active_.end(), 0u);
    for (int k = 0; k < 65; ++k) decay_[k] = std::pow(3.0, -k);
  }

  bool done() const { return active_.empty(); }

  // Builds the next label and marks the strings it covers. Returns them in
  // ascending input order.
  std::vector<std::uint32_t> next_group(std::uint64_t& lx, std::uint64_t& lz) {
    refresh_lists();
    lx = 0;
    lz = 0;
    choose_by_density(lx, lz);
    refine(lx, lz);
    std::vector<std::uint32_t> members = take_covered(lx, lz);
    if (members.empty()) {
      // Adopt the letters of the first remaining string so the loop advances.
      const std::uint32_t i = active_.front();
      const std::uint64_t sup = x_[i] | z_[i];
      lx = (lx & ~sup) | x_[i];
      lz = (lz & ~sup) | z_[i];
      members = take_covered(lx, lz);
    }
    return members;
  }

 private:
  void refresh_lists() {
    const std::uint64_t want =
        std::max<std::uint64_t>(1, (active_entries_ + kSampleEntries - 1) / kSampleEntries);
    const std::uint64_t modulus = std::bit_ceil(want);
    if (modulus_ != 0 && modulus >= modulus_) return;
    modulus_ = modulus;
    for (auto& list : lists_) list.clear();
    for (std::uint32_t i : active_) {
      if (rng::mix64(i) % modulus_ != 0) continue;
      for (std::uint64_t m = x_[i] | z_[i]; m != 0; m &= m - 1) {
        lists_[std::countr_zero(m)].push_back(i);
      }
    }
  }

  // Qubit by qubit, pick the letter carried by the largest weight of
  // candidates still compatible with the partial label. A candidate counts
  // 3^-(u-1) where u is the number of its qubits not yet decided.
  void choose_by_density(std::uint64_t& lx, std::uint64_t& lz) {
    std::uint64_t open = ~std::uint64_t{0};
    for (std::size_t m = 0; m < q_; ++m) {
      std::array<double, 4> score{};
      auto& list = lists_[m];
      std::size_t kept = 0;
      for (std::uint32_t i : list) {
        if (covered_[i]) continue;
        list[kept++] = i;
        const std::uint64_t x = x_[i];
        const std::uint64_t z = z_[i];
        if (!fits(x, z, lx, lz)) continue;
        const int undecided = std::popcount((x | z) & open);
        score[letter_code(x, z, m)] += decay_[undecided - 1];
      }
      list.resize(kept);
      unsigned best = kCodeX;
      for (unsigned code : {2u, 3u}) {
        if (score[code] > score[best]) best = code;
      }
      const std::uint64_t bit = std::uint64_t{1} << m;
      if (best & 1) lx |= bit;
      if (best & 2) lz |= bit;
      open &= ~bit;
    }
  }

  // One pass of coordinate ascent on the number of candidates that fit.
  void refine(std::uint64_t& lx, std::uint64_t& lz) const {
    for (std::size_t m = 0; m < q_; ++m) {
      const std::uint64_t bit = std::uint64_t{1} << m;
      const std::uint64_t rx = lx & ~bit;
      const std::uint64_t rz = lz & ~bit;
      std::array<std::size_t, 4> count{};
      for (std::uint32_t i : lists_[m]) {
        if (!fits(x_[i], z_[i], rx, rz)) continue;
        ++count[letter_code(x_[i], z_[i], m)];
      }
      unsigned best = letter_code(lx, lz, m);
      for (unsigned code : {1u, 2u, 3u}) {
        if (count[code] > count[best]) best = code;
      }
      lx = rx | ((best & 1) ? bit : 0);
      lz = rz | ((best & 2) ? bit : 0);
    }
  }

  std::vector<std::uint32_t> take_covered(std::uint64_t lx, std::uint64_t lz) {
    std::vector<std::uint32_t> members;
    std::size_t kept = 0;
    for (std::uint32_t i : active_) {
      if (covers(x_[i], z_[i], lx, lz)) {
        covered_[i] = 1;
        active_entries_ -= std::popcount(x_[i] | z_[i]);
        members.push_back(i);
      } else {
        active_[kept++] = i;
      }
    }
    active_.resize(kept);
    return members;
  }

  std::size_t q_;
  std::vector<std::uint64_t> x_, z_;
  std::vector<std::uint8_t> covered_;
  std::vector<std::uint32_t> active_;
  std::size_t active_entries_ = 0;
  std::vector<std::vector<std::uint32_t>> lists_;
  std::uint64_t modulus_ = 0;
  std::array<double, 65> decay_{};
};

}  // namespace

bool qwc(const PauliString& a, const PauliString& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw QubitCountMismatch(a.num_qubits(), b.num_qubits());
  }
  return fits(a.x_mask(), a.z_mask(), b.x_mask(), b.z_mask());
}

GroupAssignment assign_tpb(std::span<const PauliString> strings) {
  GroupAssignment out;
  out.group_of.assign(strings.size(), 0);
  if (strings.empty()) return out;
  const std::size_t q = strings.front().num_qubits();
  for (const auto& s : strings) {
    if (s.num_qubits() != q) throw QubitCountMismatch(q, s.num_qubits());
  }

  LabelBuilder builder(strings, q);
  while (!builder.done()) {
    std::uint64_t lx = 0;
    std::uint64_t lz = 0;
    const std::vector<std::uint32_t> members = builder.next_group(lx, lz);
    // Report the smallest label that still measures every member.
    std::uint64_t mx = 0;
    std::uint64_t mz = 0;
    const auto g = static_cast<std::uint32_t>(out.labels.size());
    for (std::uint32_t i : members) {
      mx |= strings[i].x_mask();
      mz |= strings[i].z_mask();
      out.group_of[i] = g;
    }
    out.labels.emplace_back(q, mx, mz);
  }
  return out;
}

std::vector<TPBGroup> group_tpb(std::span<const PauliString> strings) {
  const GroupAssignment assignment = assign_tpb(strings);
  std::vector<TPBGroup> groups(assignment.labels.size());
  for (std::size_t g = 0; g < groups.size(); ++g) groups[g].label = assignment.labels[g];
  for (std::size_t i = 0; i < strings.size(); ++i) {
    groups[assignment.group_of[i]].members.push_back(strings[i]);
  }
  return groups;
}

std::vector<ScalingRow> scaling_report(LatticeKind family,
                                       std::span<const std::size_t> q_values,
                                       int n) {
  if (n < 1) throw std::invalid_argument("scaling report needs n >= 1");
  std::vector<ScalingRow> rows;
  for (std::size_t q : q_values) {
    const LatticeGraph graph = lattice_for_qubits(family, q);
    const WeightedPauliSum h = build_hamiltonian(graph, uniform_couplings(graph));
    std::vector<PauliString> strings = hamiltonian_power(h, n).strings();
    const std::size_t groups = assign_tpb(strings).labels.size();
    rows.push_back({q, strings.size(), groups});
  }
  return rows;
}

}  // namespace qcm
