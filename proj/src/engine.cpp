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

#include "qcm/engine.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "qcm/errors.hpp"
#include "qcm/rng.hpp"

namespace qcm {

namespace {

// Adapts a counter-based stream to the standard engine interface.
class StreamEngine {
 public:
  using result_type = std::uint64_t;
  explicit StreamEngine(std::uint64_t key) : stream_(key) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return stream_.next_bits(); }

 private:
  rng::Stream stream_;
};

bool measures(const PauliString& label, const PauliString& member) {
  const std::uint64_t sup = member.support_mask();
  return (((member.x_mask() ^ label.x_mask()) | (member.z_mask() ^ label.z_mask())) &
          sup) == 0;
}

std::uint64_t parse_outcome(const std::string& bits, std::size_t num_qubits) {
  if (bits.size() != num_qubits) {
    throw std::invalid_argument(fmt::format(
        "outcome '{}' has {} bits, expected {}", bits, bits.size(), num_qubits));
  }
  std::uint64_t out = 0;
  for (std::size_t m = 0; m < bits.size(); ++m) {
    if (bits[m] == '1') {
      out |= std::uint64_t{1} << m;
    } else if (bits[m] != '0') {
      throw std::invalid_argument(fmt::format("bad outcome string '{}'", bits));
    }
  }
  return out;
}

std::string format_outcome(std::uint64_t bits, std::size_t num_qubits) {
  std::string out(num_qubits, '0');
  for (std::size_t m = 0; m < num_qubits; ++m) {
    if ((bits >> m) & 1) out[m] = '1';
  }
  return out;
}

// Rotates qubit t of a block into the eigenbasis of `letter`.
void rotate_into_basis(std::array<cplx, 4>& amps, unsigned dim, unsigned t,
                       Pauli letter) {
  if (letter == Pauli::I || letter == Pauli::Z) return;
  const unsigned bit = 1u << t;
  const double r = std::numbers::sqrt2 / 2;
  for (unsigned s = 0; s < dim; ++s) {
    if (s & bit) continue;
    cplx a0 = amps[s];
    cplx a1 = amps[s | bit];
    if (letter == Pauli::Y) a1 *= cplx{0, -1};  // S-dagger
    amps[s] = r * (a0 + a1);
    amps[s | bit] = r * (a0 - a1);
  }
}

}  // namespace

double expectation_exact(const PairProductState& state, const PauliString& p) {
  return state.expectation(p);
}

std::vector<cplx> trial_statevector(const TrialStateSpec& spec) {
  const std::size_t q = spec.num_qubits;
  if (q > kStatevectorQubitLimit) {
    throw GuardError(fmt::format("statevector of {} qubits exceeds the {}-qubit guard",
                                 q, kStatevectorQubitLimit));
  }
  std::vector<cplx> psi(std::size_t{1} << q, cplx{0, 0});
  psi[0] = 1;
  const double c = std::cos(spec.theta / 2);
  const double s = std::sin(spec.theta / 2);
  for (const auto& [a, b] : spec.pairs) {
    const std::size_t ba = std::size_t{1} << a;
    const std::size_t bb = std::size_t{1} << b;
    for (std::size_t i = 0; i < psi.size(); ++i) {
      if (i & bb) continue;
      const cplx v0 = psi[i];
      const cplx v1 = psi[i | bb];
      psi[i] = c * v0 - s * v1;
      psi[i | bb] = s * v0 + c * v1;
    }
    for (std::size_t i = 0; i < psi.size(); ++i) {
      if ((i & bb) && !(i & ba)) std::swap(psi[i], psi[i | ba]);
    }
    for (std::size_t i = 0; i < psi.size(); ++i) {
      if (!(i & ba)) std::swap(psi[i], psi[i | ba]);
    }
  }
  return psi;
}

double expectation_dense(std::span<const cplx> psi, const PauliString& p) {
  const std::size_t dim = std::size_t{1} << p.num_qubits();
  if (psi.size() != dim) {
    throw std::invalid_argument(fmt::format(
        "statevector has {} amplitudes, string needs {}", psi.size(), dim));
  }
  static constexpr cplx kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const std::uint64_t x = p.x_mask();
  const std::uint64_t z = p.z_mask();
  cplx acc = 0;
  for (std::size_t s = 0; s < dim; ++s) {
    const cplx term = std::conj(psi[s ^ x]) * psi[s];
    acc += (std::popcount(s & z) & 1) ? -term : term;
  }
  return (acc * kPowers[std::popcount(x & z) & 3]).real();
}

double expectation_statevector(double theta, std::size_t num_qubits,
                               const PauliString& p) {
  if (num_qubits > kStatevectorQubitLimit) {
    throw GuardError(fmt::format("statevector of {} qubits exceeds the {}-qubit guard",
                                 num_qubits, kStatevectorQubitLimit));
  }
  if (p.num_qubits() != num_qubits) throw QubitCountMismatch(num_qubits, p.num_qubits());
  return expectation_dense(trial_statevector(chain_trial_spec(num_qubits, theta)), p);
}

Counts measure_group(const PairProductState& state, const PauliString& label,
                     std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("measure_group needs shots > 0");
  if (label.num_qubits() != state.num_qubits()) {
    throw QubitCountMismatch(state.num_qubits(), label.num_qubits());
  }

  struct Table {
    std::array<double, 4> cumulative{};
    unsigned outcomes = 0;
    std::array<std::uint64_t, 4> bits{};  // register bits of each local outcome
  };
  std::vector<Table> tables;
  for (const auto& block : state.blocks()) {
    const unsigned k = static_cast<unsigned>(block.qubits.size());
    const unsigned dim = 1u << k;
    std::array<cplx, 4> amps = block.amplitudes;
    for (unsigned t = 0; t < k; ++t) rotate_into_basis(amps, dim, t, label.at(block.qubits[t]));
    Table table;
    table.outcomes = dim;
    double total = 0;
    for (unsigned s = 0; s < dim; ++s) {
      total += std::norm(amps[s]);
      table.cumulative[s] = total;
      for (unsigned t = 0; t < k; ++t) {
        if ((s >> t) & 1) table.bits[s] |= std::uint64_t{1} << block.qubits[t];
      }
    }
    for (unsigned s = 0; s < dim; ++s) table.cumulative[s] /= total;
    tables.push_back(table);
  }

  const std::uint64_t group_key = rng::derive(rng::derive(seed, "measure"), label.str());
  std::unordered_map<std::uint64_t, std::uint64_t> tally;
  for (std::uint64_t shot = 0; shot < shots; ++shot) {
    const rng::Stream stream(rng::derive(group_key, shot));
    std::uint64_t outcome = 0;
    for (std::size_t b = 0; b < tables.size(); ++b) {
      const Table& t = tables[b];
      const double u = stream.uniform_at(b);
      unsigned s = 0;
      while (s + 1 < t.outcomes && u >= t.cumulative[s]) ++s;
      outcome |= t.bits[s];
    }
    ++tally[outcome];
  }
  Counts counts;
  for (const auto& [bits, n] : tally) counts[format_outcome(bits, state.num_qubits())] = n;
  return counts;
}

ExpectationMap expectations_from_counts(const Counts& counts,
                                        const PauliString& label,
                                        std::span<const PauliString> members) {
  const std::size_t q = label.num_qubits();
  std::vector<std::pair<std::uint64_t, std::uint64_t>> outcomes;
  std::uint64_t total = 0;
  for (const auto& [bits, n] : counts) {
    outcomes.emplace_back(parse_outcome(bits, q), n);
    total += n;
  }
  ExpectationMap out;
  for (const PauliString& member : members) {
    if (member.num_qubits() != q) throw QubitCountMismatch(q, member.num_qubits());
    if (!measures(label, member)) throw IncompatibleMemberError(member.str(), label.str());
    if (member.is_identity()) {
      out[member] = 1.0;
      continue;
    }
    if (total == 0) throw std::invalid_argument("cannot estimate from empty counts");
    const std::uint64_t sup = member.support_mask();
    std::int64_t signed_total = 0;
    for (const auto& [bits, n] : outcomes) {
      signed_total += (std::popcount(bits & sup) & 1) ? -static_cast<std::int64_t>(n)
                                                      : static_cast<std::int64_t>(n);
    }
    out[member] = static_cast<double>(signed_total) / static_cast<double>(total);
  }
  return out;
}

double damping_factor(const PauliString& p, double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw std::invalid_argument(fmt::format("damping lambda {} outside [0, 1)", lambda));
  }
  return std::pow(1.0 - lambda, static_cast<double>(p.weight()));
}

ExpectationMap apply_damping_noise(const ExpectationMap& expectations, double lambda) {
  ExpectationMap out;
  out.reserve(expectations.size());
  for (const auto& [p, value] : expectations) out.emplace(p, value * damping_factor(p, lambda));
  return out;
}

MeasurementStore::MeasurementStore(std::size_t num_qubits, std::uint64_t seed,
                                   std::uint64_t shots_per_group)
    : num_qubits_(num_qubits), seed_(seed), shots_(shots_per_group) {}

void MeasurementStore::add_record(const PauliString& label,
                                  std::span<const PauliString> members,
                                  Counts counts) {
  if (is_exact()) throw std::logic_error("exact stores hold expectations, not counts");
  if (label.num_qubits() != num_qubits_) {
    throw QubitCountMismatch(num_qubits_, label.num_qubits());
  }
  std::uint64_t total = 0;
  for (const auto& [bits, n] : counts) total += n;
  if (total != shots_) {
    throw std::invalid_argument(fmt::format(
        "counts for {} sum to {}, expected {}", label.str(), total, shots_));
  }
  std::vector<PauliString> fresh;
  for (const PauliString& m : members) {
    if (m.num_qubits() != num_qubits_) throw QubitCountMismatch(num_qubits_, m.num_qubits());
    if (!measures(label, m)) throw IncompatibleMemberError(m.str(), label.str());
    if (!derived_.count(m) &&
        std::find(fresh.begin(), fresh.end(), m) == fresh.end()) {
      fresh.push_back(m);
    }
  }
  auto it = record_index_.find(label);
  std::size_t index;
  if (it == record_index_.end()) {
    index = records_.size();
    records_.push_back({label, {}, std::move(counts)});
    record_index_.emplace(label, index);
  } else {
    index = it->second;
    if (records_[index].counts != counts) {
      throw std::invalid_argument(fmt::format(
          "label {} recorded twice with different counts", label.str()));
    }
  }
  Record& rec = records_[index];
  rec.members.insert(rec.members.end(), fresh.begin(), fresh.end());
  derive_record(index, fresh);
}

void MeasurementStore::derive_record(std::size_t index,
                                     std::span<const PauliString> fresh) {
  const Record& rec = records_[index];
  const ExpectationMap values = expectations_from_counts(rec.counts, rec.label, fresh);
  for (const PauliString& m : fresh) {
    derived_[m] = values.at(m) * (lambda_ > 0 ? damping_factor(m, lambda_) : 1.0);
  }
}

void MeasurementStore::set_expectation(const PauliString& p, double value) {
  if (!is_exact()) throw std::logic_error("sampled stores derive expectations from counts");
  if (p.num_qubits() != num_qubits_) throw QubitCountMismatch(num_qubits_, p.num_qubits());
  if (!(value >= -1.0 - 1e-12 && value <= 1.0 + 1e-12)) {
    throw std::invalid_argument(
        fmt::format("expectation {} of {} outside [-1, 1]", value, p.str()));
  }
  derived_[p] = value;
}

const MeasurementStore::Record* MeasurementStore::find_record(
    const PauliString& label) const {
  auto it = record_index_.find(label);
  return it == record_index_.end() ? nullptr : &records_[it->second];
}

double MeasurementStore::expectation(const PauliString& p) const {
  auto it = derived_.find(p);
  if (it == derived_.end()) throw MissingStringError(p.str());
  return it->second;
}

MeasurementStore MeasurementStore::damped(double lambda) const {
  if (lambda_ != 0.0) throw std::logic_error("store is already damped");
  MeasurementStore out = *this;
  out.lambda_ = lambda;
  for (auto& [p, value] : out.derived_) value *= damping_factor(p, lambda);
  return out;
}

MeasurementStore MeasurementStore::resampled(std::uint64_t key) const {
  MeasurementStore out(num_qubits_, seed_, shots_);
  out.theta_ = theta_;
  out.lambda_ = lambda_;
  if (is_exact()) {
    out.derived_ = derived_;
    return out;
  }
  out.records_.reserve(records_.size());
  for (const Record& rec : records_) {
    StreamEngine engine(rng::derive(key, rec.label.str()));
    Counts counts;
    std::uint64_t remaining = shots_;
    std::uint64_t mass = shots_;
    for (const auto& [bits, n] : rec.counts) {
      if (remaining == 0) break;
      std::uint64_t draw = remaining;
      if (n < mass) {
        std::binomial_distribution<std::uint64_t> binom(
            remaining, static_cast<double>(n) / static_cast<double>(mass));
        draw = binom(engine);
      }
      if (draw > 0) counts[bits] = draw;
      remaining -= draw;
      mass -= n;
    }
    out.record_index_.emplace(rec.label, out.records_.size());
    out.records_.push_back({rec.label, rec.members, std::move(counts)});
    out.derive_record(out.records_.size() - 1, rec.members);
  }
  return out;
}

MeasurementStore measure_exact(const PairProductState& state,
                               std::span<const std::vector<TPBGroup>> groups_by_order) {
  MeasurementStore store(state.num_qubits(), 0, 0);
  for (const auto& groups : groups_by_order) {
    for (const TPBGroup& g : groups) {
      for (const PauliString& m : g.members) {
        if (!store.contains(m)) store.set_expectation(m, state.expectation(m));
      }
    }
  }
  return store;
}

MeasurementStore measure_shots(const PairProductState& state,
                               std::span<const std::vector<TPBGroup>> groups_by_order,
                               std::uint64_t shots, std::uint64_t seed) {
  MeasurementStore store(state.num_qubits(), seed, shots);
  for (const auto& groups : groups_by_order) {
    for (const TPBGroup& g : groups) {
      if (const auto* rec = store.find_record(g.label)) {
        store.add_record(g.label, g.members, rec->counts);
      } else {
        store.add_record(g.label, g.members, measure_group(state, g.label, shots, seed));
      }
    }
  }
  return store;
}

}  // namespace qcm
