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

#include "qcm/pauli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "qcm/errors.hpp"
#include "qcm/rng.hpp"

namespace qcm {

namespace {

constexpr std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

constexpr std::uint64_t register_mask(std::size_t num_qubits) {
  return num_qubits >= 64 ? ~std::uint64_t{0} : bit(num_qubits) - 1;
}

void check_register(std::size_t num_qubits) {
  if (num_qubits > kMaxQubits) {
    throw std::invalid_argument(fmt::format(
        "{} qubits requested; Pauli strings support at most {}", num_qubits,
        kMaxQubits));
  }
}

// Letter rank for ordering: I < X < Y < Z.
constexpr int letter_rank(bool x, bool z) { return x ? (z ? 2 : 1) : (z ? 3 : 0); }

std::uint64_t mask_hash(std::uint64_t x, std::uint64_t z) {
  return rng::mix64(x * rng::kGolden ^ rng::mix64(z));
}

std::atomic<unsigned> g_expansion_threads{0};

unsigned expansion_threads() {
  const unsigned requested = g_expansion_threads.load();
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Open-addressing accumulator from masks to complex weight. Entries are
// accumulated in call order, so per-key sums are reproducible.
class Accumulator {
 public:
  explicit Accumulator(std::size_t expected) {
    std::size_t cap = 16;
    while (cap * 7 < expected * 10) cap <<= 1;
    resize(cap);
  }

  void add(std::uint64_t hash, std::uint64_t x, std::uint64_t z, double re,
           double im) {
    std::size_t i = hash & (capacity_ - 1);
    for (;;) {
      if (!used_[i]) {
        if ((size_ + 1) * 10 > capacity_ * 7) {
          grow();
          add(hash, x, z, re, im);
          return;
        }
        used_[i] = 1;
        slots_[i] = {x, z, re, im};
        ++size_;
        return;
      }
      Slot& s = slots_[i];
      if (s.x == x && s.z == z) {
        s.re += re;
        s.im += im;
        return;
      }
      i = (i + 1) & (capacity_ - 1);
    }
  }

  // Drains into terms; clears the table.
  void drain(std::size_t num_qubits, double tol,
             std::vector<WeightedPauliSum::Term>& out) {
    out.reserve(out.size() + size_);
    for (std::size_t i = 0; i < capacity_; ++i) {
      if (!used_[i]) continue;
      const Slot& s = slots_[i];
      if (std::abs(s.im) > kImaginaryResidueTol) {
        throw ImaginaryResidueError(fmt::format(
            "imaginary residue {:.3e} on {} exceeds {:.0e}", s.im,
            PauliString(num_qubits, s.x, s.z).str(), kImaginaryResidueTol));
      }
      if (std::abs(s.re) <= tol) continue;
      out.push_back({PauliString(num_qubits, s.x, s.z), s.re});
    }
    slots_.clear();
    slots_.shrink_to_fit();
    used_.clear();
    used_.shrink_to_fit();
    size_ = 0;
  }

 private:
  struct Slot {
    std::uint64_t x, z;
    double re, im;
  };

  void resize(std::size_t cap) {
    capacity_ = cap;
    slots_.assign(cap, Slot{});
    used_.assign(cap, 0);
  }

  void grow() {
    std::vector<Slot> old_slots = std::move(slots_);
    std::vector<std::uint8_t> old_used = std::move(used_);
    resize(capacity_ * 2);
    size_ = 0;
    for (std::size_t i = 0; i < old_used.size(); ++i) {
      if (!old_used[i]) continue;
      const Slot& s = old_slots[i];
      // Re-inserting into an empty table keeps each key's accumulated value.
      add(mask_hash(s.x, s.z), s.x, s.z, s.re, s.im);
    }
  }

  std::vector<Slot> slots_;
  std::vector<std::uint8_t> used_;
  std::size_t capacity_ = 0;
  std::size_t size_ = 0;
};

void accumulate_phased(Accumulator& acc, std::uint64_t hash, std::uint64_t x,
                       std::uint64_t z, int phase, double w) {
  switch (phase) {
    case 0: acc.add(hash, x, z, w, 0.0); break;
    case 1: acc.add(hash, x, z, 0.0, w); break;
    case 2: acc.add(hash, x, z, -w, 0.0); break;
    default: acc.add(hash, x, z, 0.0, -w); break;
  }
}

}  // namespace

char to_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

PauliString::PauliString(std::size_t num_qubits)
    : num_qubits_(static_cast<std::uint32_t>(num_qubits)) {
  check_register(num_qubits);
}

PauliString::PauliString(std::size_t num_qubits, std::uint64_t x_mask,
                         std::uint64_t z_mask)
    : x_(x_mask), z_(z_mask), num_qubits_(static_cast<std::uint32_t>(num_qubits)) {
  check_register(num_qubits);
  if (((x_mask | z_mask) & ~register_mask(num_qubits)) != 0) {
    throw std::invalid_argument("Pauli masks set bits beyond the register");
  }
}

PauliString PauliString::from_str(std::string_view letters) {
  check_register(letters.size());
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  for (std::size_t m = 0; m < letters.size(); ++m) {
    switch (letters[m]) {
      case 'I':
      case '_': break;
      case 'X': x |= bit(m); break;
      case 'Y': x |= bit(m); z |= bit(m); break;
      case 'Z': z |= bit(m); break;
      default:
        throw std::invalid_argument(
            fmt::format("invalid Pauli letter '{}' in \"{}\"", letters[m], letters));
    }
  }
  return PauliString(letters.size(), x, z);
}

PauliString PauliString::single(std::size_t num_qubits, std::size_t qubit,
                                Pauli letter) {
  if (qubit >= num_qubits) throw std::out_of_range("qubit index out of range");
  const std::uint64_t b = bit(qubit);
  const bool has_x = letter == Pauli::X || letter == Pauli::Y;
  const bool has_z = letter == Pauli::Z || letter == Pauli::Y;
  return PauliString(num_qubits, has_x ? b : 0, has_z ? b : 0);
}

PauliString PauliString::pair(std::size_t num_qubits, std::size_t a,
                              std::size_t b, Pauli letter) {
  const PauliString pa = single(num_qubits, a, letter);
  const PauliString pb = single(num_qubits, b, letter);
  return PauliString(num_qubits, pa.x_ | pb.x_, pa.z_ | pb.z_);
}

std::vector<std::size_t> PauliString::support() const {
  std::vector<std::size_t> out;
  out.reserve(weight());
  for (std::uint64_t s = support_mask(); s != 0; s &= s - 1) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(s)));
  }
  return out;
}

Pauli PauliString::at(std::size_t qubit) const {
  if (qubit >= num_qubits_) throw std::out_of_range("qubit index out of range");
  const bool x = (x_ >> qubit) & 1;
  const bool z = (z_ >> qubit) & 1;
  return x ? (z ? Pauli::Y : Pauli::X) : (z ? Pauli::Z : Pauli::I);
}

std::string PauliString::str() const {
  std::string out(num_qubits_, 'I');
  for (std::size_t m = 0; m < num_qubits_; ++m) out[m] = to_char(at(m));
  return out;
}

bool operator<(const PauliString& a, const PauliString& b) {
  if (a.num_qubits() != b.num_qubits()) return a.num_qubits() < b.num_qubits();
  const std::uint64_t diff = (a.x_mask() ^ b.x_mask()) | (a.z_mask() ^ b.z_mask());
  if (diff == 0) return false;
  const int m = std::countr_zero(diff);
  return letter_rank((a.x_mask() >> m) & 1, (a.z_mask() >> m) & 1) <
         letter_rank((b.x_mask() >> m) & 1, (b.z_mask() >> m) & 1);
}

std::size_t PauliStringHash::operator()(const PauliString& p) const noexcept {
  return static_cast<std::size_t>(
      mask_hash(p.x_mask(), p.z_mask()) ^ rng::mix64(p.num_qubits()));
}

std::complex<double> PhasedPauli::phase() const {
  static constexpr std::complex<double> kPowers[4] = {
      {1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return kPowers[phase_exponent & 3];
}

PhasedPauli pauli_mul(const PauliString& a, const PauliString& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw QubitCountMismatch(a.num_qubits(), b.num_qubits());
  }
  return {product_phase_exponent(a.x_mask(), a.z_mask(), b.x_mask(), b.z_mask()),
          PauliString(a.num_qubits(), a.x_mask() ^ b.x_mask(),
                      a.z_mask() ^ b.z_mask())};
}

WeightedPauliSum WeightedPauliSum::from_term(const PauliString& string,
                                             double weight) {
  const std::pair<std::complex<double>, PauliString> raw{weight, string};
  return sum_compress(string.num_qubits(), std::span(&raw, 1), 0.0);
}

WeightedPauliSum WeightedPauliSum::identity(std::size_t num_qubits) {
  return from_term(PauliString(num_qubits), 1.0);
}

std::optional<double> WeightedPauliSum::weight_of(
    const PauliString& string) const {
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), string,
      [](const Term& t, const PauliString& s) { return t.string < s; });
  if (it == terms_.end() || !(it->string == string)) return std::nullopt;
  return it->weight;
}

std::vector<PauliString> WeightedPauliSum::strings() const {
  std::vector<PauliString> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back(t.string);
  return out;
}

WeightedPauliSum sum_compress(
    std::size_t num_qubits,
    std::span<const std::pair<std::complex<double>, PauliString>> raw_terms,
    double tol) {
  if (tol < 0) throw std::invalid_argument("compression tolerance must be >= 0");
  check_register(num_qubits);
  Accumulator acc(raw_terms.size());
  for (const auto& [w, p] : raw_terms) {
    if (p.num_qubits() != num_qubits) {
      throw QubitCountMismatch(num_qubits, p.num_qubits());
    }
    acc.add(mask_hash(p.x_mask(), p.z_mask()), p.x_mask(), p.z_mask(), w.real(),
            w.imag());
  }
  WeightedPauliSum out(num_qubits);
  acc.drain(num_qubits, tol, out.terms_);
  std::sort(out.terms_.begin(), out.terms_.end(),
            [](const auto& l, const auto& r) { return l.string < r.string; });
  return out;
}

WeightedPauliSum multiply(const WeightedPauliSum& a, const WeightedPauliSum& b,
                          double tol) {
  if (a.num_qubits() != b.num_qubits()) {
    throw QubitCountMismatch(a.num_qubits(), b.num_qubits());
  }
  if (tol < 0) throw std::invalid_argument("compression tolerance must be >= 0");
  const std::size_t q = a.num_qubits();
  const auto& at = a.terms();
  const auto& bt = b.terms();

  std::vector<std::uint64_t> bx(bt.size()), bz(bt.size());
  std::vector<double> bw(bt.size());
  for (std::size_t j = 0; j < bt.size(); ++j) {
    bx[j] = bt[j].string.x_mask();
    bz[j] = bt[j].string.z_mask();
    bw[j] = bt[j].weight;
  }

  // Output keys are partitioned into shards by hash; each shard is filled by
  // one pass over all pairs in (i, j) order, so every key accumulates its
  // contributions in the same order regardless of sharding or threading.
  const std::size_t pairs = at.size() * bt.size();
  constexpr std::size_t kPairsPerShard = std::size_t{1} << 24;
  int shard_bits = 0;
  while ((pairs >> shard_bits) > kPairsPerShard && shard_bits < 8) ++shard_bits;
  const std::size_t shard_count = std::size_t{1} << shard_bits;
  const int shift = 64 - shard_bits;

  std::vector<std::vector<WeightedPauliSum::Term>> shard_terms(shard_count);
  std::atomic<std::size_t> next_shard{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t shard = next_shard.fetch_add(1);
      if (shard >= shard_count) return;
      try {
        Accumulator acc(std::min<std::size_t>(pairs / shard_count + 1, 1 << 20));
        for (const auto& ta : at) {
          const std::uint64_t xa = ta.string.x_mask();
          const std::uint64_t za = ta.string.z_mask();
          const double wa = ta.weight;
          for (std::size_t j = 0; j < bt.size(); ++j) {
            const std::uint64_t x = xa ^ bx[j];
            const std::uint64_t z = za ^ bz[j];
            const std::uint64_t h = mask_hash(x, z);
            if (shard_bits != 0 && (h >> shift) != shard) continue;
            accumulate_phased(acc, h, x, z,
                              product_phase_exponent(xa, za, bx[j], bz[j]),
                              wa * bw[j]);
          }
        }
        acc.drain(q, tol, shard_terms[shard]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next_shard.store(shard_count);
        return;
      }
    }
  };

  const unsigned workers = static_cast<unsigned>(
      std::min<std::size_t>(expansion_threads(), shard_count));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  WeightedPauliSum out(q);
  std::size_t total = 0;
  for (const auto& s : shard_terms) total += s.size();
  out.terms_.reserve(total);
  for (auto& s : shard_terms) {
    out.terms_.insert(out.terms_.end(), s.begin(), s.end());
    std::vector<WeightedPauliSum::Term>().swap(s);
  }
  std::sort(out.terms_.begin(), out.terms_.end(),
            [](const auto& l, const auto& r) { return l.string < r.string; });
  return out;
}

WeightedPauliSum hamiltonian_power(const WeightedPauliSum& h, int n, double tol) {
  if (n < 0) throw std::invalid_argument("power must be non-negative");
  if (n == 0) return WeightedPauliSum::identity(h.num_qubits());
  WeightedPauliSum level = h;
  for (int k = 2; k <= n; ++k) level = multiply(level, h, tol);
  return level;
}

std::vector<WeightedPauliSum> hamiltonian_powers(const WeightedPauliSum& h,
                                                 int nmax, double tol) {
  if (nmax < 1) throw std::invalid_argument("nmax must be >= 1");
  std::vector<WeightedPauliSum> out;
  out.reserve(static_cast<std::size_t>(nmax));
  out.push_back(h);
  for (int k = 2; k <= nmax; ++k) out.push_back(multiply(out.back(), h, tol));
  return out;
}

void set_expansion_threads(unsigned count) { g_expansion_threads.store(count); }

}  // namespace qcm
