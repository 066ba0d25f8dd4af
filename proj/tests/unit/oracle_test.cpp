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

#include "qcm/oracle.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"

#include "dense_reference.hpp"
#include "qcm/errors.hpp"
#include "qcm/models.hpp"

using namespace qcm;
using qcm::testing::sum_matrix;

namespace {

WeightedPauliSum lattice_h(LatticeKind kind, std::vector<std::size_t> dims,
                           std::optional<std::uint64_t> seed = std::nullopt) {
  const LatticeGraph g = build_lattice(kind, dims);
  return build_hamiltonian(g, seed ? sample_couplings(g, *seed) : uniform_couplings(g));
}

WeightedPauliSum random_sum(std::mt19937_64& gen, std::size_t q, std::size_t terms) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::pair<std::complex<double>, PauliString>> raw;
  for (std::size_t t = 0; t < terms; ++t) {
    std::string s;
    for (std::size_t m = 0; m < q; ++m) s += "IXYZ"[gen() % 4];
    raw.emplace_back(u(gen), PauliString::from_str(s));
  }
  return sum_compress(q, raw);
}

double reference_ground(const WeightedPauliSum& h) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sum_matrix(h));
  return solver.eigenvalues()(0);
}

}  // namespace

TEST(exact_ground_energy, examples) {
  EXPECT_NEAR(exact_ground_energy(lattice_h(LatticeKind::Chain, {2})), -1.5, 1e-12);
  EXPECT_NEAR(exact_ground_energy(WeightedPauliSum::from_term(PauliString::from_str("Z"), 1.0)),
              -1.0, 1e-12);
}

TEST(exact_ground_energy, dense_and_iterative_agree) {
  for (const auto& h : {lattice_h(LatticeKind::Square, {2, 3}),
                        lattice_h(LatticeKind::Square, {2, 4}, 3),
                        lattice_h(LatticeKind::Chain, {9}, 4)}) {
    const double dense = exact_ground_energy(h, {.method = OracleMethod::Dense});
    const double iterative = exact_ground_energy(h, {.method = OracleMethod::Iterative});
    EXPECT_NEAR(dense, iterative, 1e-9);
    EXPECT_NEAR(dense, reference_ground(h), 1e-10);
  }
}

TEST(exact_ground_energy, complex_operators) {
  std::mt19937_64 gen(13);
  for (int t = 0; t < 5; ++t) {
    const WeightedPauliSum h = random_sum(gen, 5, 20);
    const double ref = reference_ground(h);
    EXPECT_NEAR(exact_ground_energy(h, {.method = OracleMethod::Dense}), ref, 1e-10);
    EXPECT_NEAR(exact_ground_energy(h, {.method = OracleMethod::Iterative}), ref, 1e-9);
  }
}

TEST(exact_ground_energy, guards) {
  const WeightedPauliSum big = lattice_h(LatticeKind::Chain, {11});
  EXPECT_THROW(exact_ground_energy(big, {.method = OracleMethod::Dense}), GuardError);
  const WeightedPauliSum huge = lattice_h(LatticeKind::Chain, {17});
  EXPECT_THROW(exact_ground_energy(huge), GuardError);
}

TEST(sparse_hamiltonian, matches_kronecker_reference) {
  std::mt19937_64 gen(17);
  for (int t = 0; t < 10; ++t) {
    const WeightedPauliSum h = random_sum(gen, 4, 12);
    const SparseHamiltonian sh(h);
    EXPECT_LT(qcm::testing::max_abs_diff(sh.dense(), sum_matrix(h)), 1e-12);
  }
  const WeightedPauliSum heis = lattice_h(LatticeKind::Square, {2, 3}, 5);
  const SparseHamiltonian sh(heis);
  EXPECT_TRUE(sh.is_real());
  EXPECT_LT(qcm::testing::max_abs_diff(sh.dense(), sum_matrix(heis)), 1e-12);
}

TEST(sparse_hamiltonian, odd_y_count_is_complex) {
  std::vector<std::pair<std::complex<double>, PauliString>> raw = {
      {0.5, PauliString::from_str("XY")}, {0.5, PauliString::from_str("YX")}};
  const SparseHamiltonian sh(sum_compress(2, raw));
  EXPECT_FALSE(sh.is_real());
  std::vector<double> in(4, 1.0);
  std::vector<double> out(4);
  EXPECT_THROW(sh.apply(std::span<const double>(in), std::span<double>(out)), std::logic_error);
}

TEST(sparse_hamiltonian, real_and_complex_apply_agree) {
  const WeightedPauliSum h = lattice_h(LatticeKind::Square, {2, 3}, 9);
  const SparseHamiltonian sh(h);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> r(sh.dimension());
  std::vector<cplx> c(sh.dimension());
  for (std::size_t k = 0; k < r.size(); ++k) c[k] = r[k] = u(gen);
  std::vector<double> r_out(r.size());
  std::vector<cplx> c_out(c.size());
  sh.apply(std::span<const double>(r), std::span<double>(r_out));
  sh.apply(std::span<const cplx>(c), std::span<cplx>(c_out));
  for (std::size_t k = 0; k < r.size(); ++k) {
    EXPECT_NEAR(c_out[k].real(), r_out[k], 1e-14);
    EXPECT_NEAR(c_out[k].imag(), 0.0, 1e-14);
  }
}

TEST(exact_moments, two_qubit_neel) {
  const WeightedPauliSum h = lattice_h(LatticeKind::Chain, {2});
  const MomentVector m = exact_moments(h, trial_state(chain_trial_spec(2, std::numbers::pi)), 4);
  const double expect[4] = {-0.5, 1.25, -1.625, 2.5625};
  for (int n = 1; n <= 4; ++n) EXPECT_NEAR(m[n], expect[n - 1], 1e-14);
}

TEST(exact_moments, eigenstate) {
  const WeightedPauliSum h = lattice_h(LatticeKind::Chain, {2});
  const std::vector<cplx> singlet = {0.0, M_SQRT1_2, -M_SQRT1_2, 0.0};
  const MomentVector m = exact_moments(h, singlet, 4);
  for (int n = 1; n <= 4; ++n) EXPECT_NEAR(m[n], std::pow(-1.5, n), 1e-14);
}

TEST(exact_moments, agrees_with_pauli_expansion_over_theta_grid) {
  const WeightedPauliSum h = lattice_h(LatticeKind::Square, {2, 3});
  const auto powers = hamiltonian_powers(h, 4);
  for (int k = 0; k < 13; ++k) {
    const double theta = (0.7 + 0.05 * k) * std::numbers::pi;
    const PairProductState s = trial_state(chain_trial_spec(6, theta));
    const MomentVector a = exact_moments(h, s, 4);
    const MomentVector b = assemble_moments(powers, s);
    for (int n = 1; n <= 4; ++n) EXPECT_NEAR(a[n], b[n], 1e-9) << theta << " " << n;
  }
}

TEST(exact_moments, route_equivalence_random_couplings) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  for (const auto& dims : std::vector<std::vector<std::size_t>>{{2, 2}, {2, 3}, {2, 5}, {3, 3}}) {
    for (int t = 0; t < 3; ++t) {
      const WeightedPauliSum h = lattice_h(LatticeKind::Square, dims, gen());
      const double theta = angle(gen);
      const PairProductState s = trial_state(chain_trial_spec(h.num_qubits(), theta));
      const MomentVector a = exact_moments(h, s, 4);
      const MomentVector b = assemble_moments(hamiltonian_powers(h, 4), s);
      for (int n = 1; n <= 4; ++n) EXPECT_NEAR(a[n], b[n], 1e-9);
    }
  }
}

TEST(exact_moments, guards) {
  const WeightedPauliSum h = lattice_h(LatticeKind::Chain, {23});
  EXPECT_THROW(exact_moments(h, trial_state(chain_trial_spec(23, 1.0)), 2), GuardError);
  const WeightedPauliSum h2 = lattice_h(LatticeKind::Chain, {2});
  EXPECT_THROW(exact_moments(h2, trial_state(chain_trial_spec(3, 1.0)), 2), QubitCountMismatch);
}

TEST(oracle, variational_bound) {
  for (const auto& dims : std::vector<std::vector<std::size_t>>{{2, 3}, {3, 3}}) {
    const WeightedPauliSum h = lattice_h(LatticeKind::Square, dims, 31);
    const double e0 = exact_ground_energy(h);
    for (int k = 0; k < 8; ++k) {
      const double theta = k * std::numbers::pi / 4;
      const MomentVector m = exact_moments(h, trial_state(chain_trial_spec(h.num_qubits(), theta)), 1);
      EXPECT_LE(e0, m[1] + 1e-12);
    }
  }
}
