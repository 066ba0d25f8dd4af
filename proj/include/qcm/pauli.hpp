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

#include <bit>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qcm {

/// Widest register a PauliString can describe (one machine word per mask).
inline constexpr std::size_t kMaxQubits = 64;

inline constexpr double kDefaultCompressionTol = 1e-12;
inline constexpr double kImaginaryResidueTol = 1e-12;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);

/**
 * A q-qubit Pauli word in symplectic form.
 *
 * Qubit m carries the letter encoded by the bit pair (x_mask bit m, z_mask bit
 * m): (0,0)=I, (1,0)=X, (1,1)=Y, (0,1)=Z. Y is the Hermitian Pauli Y, not the
 * product XZ. The string form lists letters in qubit-index order, qubit 0
 * first.
 */
class PauliString {
 public:
  PauliString() = default;

  /// Identity on num_qubits qubits.
  explicit PauliString(std::size_t num_qubits);

  PauliString(std::size_t num_qubits, std::uint64_t x_mask,
              std::uint64_t z_mask);

  /// Parses letters from {I, X, Y, Z}; '_' is accepted as identity.
  static PauliString from_str(std::string_view letters);

  /// Letter `letter` at `qubit`, identity elsewhere.
  static PauliString single(std::size_t num_qubits, std::size_t qubit,
                            Pauli letter);

  /// Same letter on two qubits, identity elsewhere.
  static PauliString pair(std::size_t num_qubits, std::size_t a, std::size_t b,
                          Pauli letter);

  std::size_t num_qubits() const { return num_qubits_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }
  std::uint64_t support_mask() const { return x_ | z_; }

  /// Qubit indices carrying a non-identity letter, ascending.
  std::vector<std::size_t> support() const;

  /// Number of non-identity letters.
  std::size_t weight() const { return std::popcount(support_mask()); }

  bool is_identity() const { return support_mask() == 0; }

  Pauli at(std::size_t qubit) const;

  std::string str() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
  std::uint32_t num_qubits_ = 0;
};

/// Lexicographic order on letters (qubit 0 most significant, I < X < Y < Z).
/// Strings on fewer qubits sort first.
bool operator<(const PauliString& a, const PauliString& b);

struct PauliStringHash {
  std::size_t operator()(const PauliString& p) const noexcept;
};

/// Product of two Pauli strings: a * b = i^phase_exponent * product.
struct PhasedPauli {
  int phase_exponent = 0;  // 0..3
  PauliString product;

  std::complex<double> phase() const;
};

PhasedPauli pauli_mul(const PauliString& a, const PauliString& b);

/// i^k exponent of a*b for masks on a common register (no size checks).
inline int product_phase_exponent(std::uint64_t x1, std::uint64_t z1,
                                  std::uint64_t x2, std::uint64_t z2) {
  // P(x,z) = i^{x.z} X^x Z^z, and Z^z1 X^x2 = (-1)^{z1.x2} X^x2 Z^z1.
  const int g = std::popcount(x1 & z1) + std::popcount(x2 & z2) +
                2 * std::popcount(z1 & x2) -
                std::popcount((x1 ^ x2) & (z1 ^ z2));
  return g & 3;
}

/**
 * Real-weighted sum of Pauli strings on a fixed register.
 *
 * Terms are unique, sorted by the PauliString order and never carry a weight
 * at or below the compression tolerance they were built with. Immutable once
 * built.
 */
class WeightedPauliSum {
 public:
  struct Term {
    PauliString string;
    double weight = 0.0;
  };

  WeightedPauliSum() = default;
  explicit WeightedPauliSum(std::size_t num_qubits) : num_qubits_(num_qubits) {}

  /// Single-term sum (identity times weight when `string` is identity).
  static WeightedPauliSum from_term(const PauliString& string, double weight);

  /// The identity operator on num_qubits qubits.
  static WeightedPauliSum identity(std::size_t num_qubits);

  std::size_t num_qubits() const { return num_qubits_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Weight of `string`, or nullopt when absent.
  std::optional<double> weight_of(const PauliString& string) const;

  std::vector<PauliString> strings() const;

 private:
  friend WeightedPauliSum sum_compress(
      std::size_t, std::span<const std::pair<std::complex<double>, PauliString>>,
      double);
  friend WeightedPauliSum multiply(const WeightedPauliSum&,
                                   const WeightedPauliSum&, double);

  std::size_t num_qubits_ = 0;
  std::vector<Term> terms_;
};

/**
 * Merges duplicate strings, drops |weight| <= tol and discards imaginary
 * parts after checking each is within kImaginaryResidueTol.
 *
 * Throws QubitCountMismatch when a string is not on num_qubits qubits and
 * ImaginaryResidueError when a merged imaginary part is too large.
 */
WeightedPauliSum sum_compress(
    std::size_t num_qubits,
    std::span<const std::pair<std::complex<double>, PauliString>> raw_terms,
    double tol = kDefaultCompressionTol);

/// Compressed product a * b. Deterministic for any worker count.
WeightedPauliSum multiply(const WeightedPauliSum& a, const WeightedPauliSum& b,
                          double tol = kDefaultCompressionTol);

/// Compressed H^n built level by level (H^(k+1) = H^k * H).
WeightedPauliSum hamiltonian_power(const WeightedPauliSum& h, int n,
                                   double tol = kDefaultCompressionTol);

/// H^1 .. H^nmax, element k-1 holding H^k.
std::vector<WeightedPauliSum> hamiltonian_powers(
    const WeightedPauliSum& h, int nmax, double tol = kDefaultCompressionTol);

/// Sets the worker count used by multiply(); 0 selects the hardware
/// concurrency. Results do not depend on this value.
void set_expansion_threads(unsigned count);

}  // namespace qcm
