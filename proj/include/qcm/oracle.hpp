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
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qcm/estimator.hpp"
#include "qcm/pauli.hpp"
#include "qcm/state.hpp"

namespace qcm {

inline constexpr std::size_t kDenseQubitLimit = 10;
inline constexpr std::size_t kIterativeQubitLimit = 16;
inline constexpr std::size_t kStretchQubitLimit = 25;

/**
 * Matrix-free form of a weighted Pauli sum. Terms sharing a bit-flip mask are
 * applied together; the diagonal (flip-free) part is tabulated once.
 * P(x, z)|s> = i^{|x & z|} (-1)^{|s & z|} |s ^ x>.
 */
class SparseHamiltonian {
 public:
  explicit SparseHamiltonian(const WeightedPauliSum& h);

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return std::size_t{1} << num_qubits_; }
  /// True when every term has an even number of Y letters, so the matrix is
  /// real in the computational basis.
  bool is_real() const { return real_; }

  /// out = H in.
  void apply(std::span<const cplx> in, std::span<cplx> out) const;
  /// Real arithmetic version; requires is_real().
  void apply(std::span<const double> in, std::span<double> out) const;

  /// Dense matrix, guarded at 12 qubits.
  Eigen::MatrixXcd dense() const;

 private:
  struct FlipGroup {
    std::uint64_t x = 0;
    std::vector<std::uint64_t> z;
    std::vector<cplx> coefficient;  // weight * i^{|x & z|}
  };

  template <typename T>
  void apply_impl(std::span<const T> in, std::span<T> out) const;

  std::size_t num_qubits_ = 0;
  bool real_ = true;
  std::vector<double> diagonal_;
  std::vector<FlipGroup> flips_;
};

enum class OracleMethod { Auto, Dense, Iterative };

struct OracleOptions {
  OracleMethod method = OracleMethod::Auto;
  /// Permits the iterative path up to kStretchQubitLimit qubits with three
  /// Lanczos vectors (several GB of memory at 25 qubits).
  bool allow_stretch = false;
  double tolerance = 1e-9;  // relative, on the eigenvalue
  std::size_t max_iterations = 2000;
  std::uint64_t seed = 0x51D5EEDULL;  // start vector
};

/// Lowest eigenvalue. Auto picks dense up to kDenseQubitLimit qubits and
/// Lanczos above. Throws GuardError beyond the permitted size and
/// ConvergenceError when the iteration cap is reached.
double exact_ground_energy(const WeightedPauliSum& h, const OracleOptions& options = {});

/// <psi|H^n|psi> for n = 1..nmax by repeated application of H to the dense
/// state (no Pauli expansion). Guarded at 22 qubits.
MomentVector exact_moments(const WeightedPauliSum& h, std::span<const cplx> psi, int nmax);
MomentVector exact_moments(const WeightedPauliSum& h, const PairProductState& state,
                           int nmax);

}  // namespace qcm
