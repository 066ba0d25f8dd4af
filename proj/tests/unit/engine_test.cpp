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

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "gtest/gtest.h"

#include "dense_reference.hpp"
#include "qcm/errors.hpp"
#include "qcm/io.hpp"
#include "qcm/pipeline.hpp"

using namespace qcm;

namespace {

constexpr double kPi = std::numbers::pi;

PairProductState chain_state(std::size_t q, double theta) {
  return trial_state(chain_trial_spec(q, theta));
}

PauliString random_string(std::mt19937_64& gen, std::size_t q) {
  std::string s;
  for (std::size_t m = 0; m < q; ++m) s += "IXYZ"[gen() % 4];
  return PauliString::from_str(s);
}

// <psi|P|psi> from the Kronecker-product matrix of P.
double reference_expectation(const std::vector<cplx>& psi, const PauliString& p) {
  const Eigen::Map<const Eigen::VectorXcd> v(psi.data(), static_cast<Eigen::Index>(psi.size()));
  return (v.adjoint() * qcm::testing::string_matrix(p.str()) * v)(0, 0).real();
}

MomentPlan plan_2x3(int nmax) {
  const std::size_t dims[2] = {2, 3};
  const LatticeGraph g = build_lattice(LatticeKind::Square, dims);
  return make_plan(build_hamiltonian(g, uniform_couplings(g)), nmax);
}

}  // namespace

TEST(expectation_exact, neel_examples) {
  const PairProductState s = chain_state(2, kPi);
  EXPECT_EQ(expectation_exact(s, PauliString::from_str("ZZ")), -1.0);
  EXPECT_NEAR(expectation_exact(s, PauliString::from_str("XX")), 0.0, 1e-15);
  EXPECT_EQ(expectation_exact(s, PauliString::from_str("II")), 1.0);
}

TEST(expectation_exact, pair_xx_is_sin_theta) {
  for (double theta : {0.1, 0.7 * kPi, 2.0, kPi}) {
    const PairProductState s = chain_state(6, theta);
    const auto psi = trial_statevector(chain_trial_spec(6, theta));
    for (std::size_t a : {0u, 2u, 4u}) {
      const PauliString xx = PauliString::pair(6, a, a + 1, Pauli::X);
      EXPECT_NEAR(expectation_exact(s, xx), std::sin(theta), 1e-14);
      EXPECT_NEAR(reference_expectation(psi, xx), std::sin(theta), 1e-14);
    }
  }
}

TEST(expectation_exact, matches_kronecker_reference) {
  std::mt19937_64 gen(8);
  for (double theta : {0.3, 1.1, 2.9}) {
    const PairProductState s = chain_state(5, theta);
    const auto psi = s.to_statevector();
    for (int t = 0; t < 100; ++t) {
      const PauliString p = random_string(gen, 5);
      EXPECT_NEAR(expectation_exact(s, p), reference_expectation(psi, p), 1e-13) << p.str();
    }
  }
}

TEST(expectation_statevector, agrees_with_product_state) {
  std::mt19937_64 gen(9);
  const std::size_t q = 10;
  const double theta = 0.83 * kPi;
  const PairProductState s = chain_state(q, theta);
  const auto psi = trial_statevector(chain_trial_spec(q, theta));
  for (int t = 0; t < 1000; ++t) {
    const PauliString p = random_string(gen, q);
    EXPECT_NEAR(expectation_dense(psi, p), expectation_exact(s, p), 1e-12) << p.str();
  }
  EXPECT_EQ(expectation_statevector(theta, q, PauliString(q)), 1.0);
}

TEST(expectation_statevector, memory_guard) {
  EXPECT_THROW(expectation_statevector(1.0, 23, PauliString(23)), GuardError);
  EXPECT_THROW(trial_statevector(chain_trial_spec(23, 1.0)), GuardError);
}

TEST(measure_group, neel_z_basis_is_deterministic) {
  const auto counts = measure_group(chain_state(6, kPi), PauliString::from_str("ZZZZZZ"), 500, 1);
  ASSERT_EQ(counts.size(), 1u);
  EXPECT_EQ(counts.begin()->first, "010101");
  EXPECT_EQ(counts.begin()->second, 500u);
}

TEST(measure_group, counts_sum_and_seed_determinism) {
  const PairProductState s = chain_state(4, 1.3);
  const PauliString label = PauliString::from_str("XXZY");
  const Counts a = measure_group(s, label, 777, 42);
  EXPECT_EQ(a, measure_group(s, label, 777, 42));
  EXPECT_NE(a, measure_group(s, label, 777, 43));
  std::uint64_t total = 0;
  for (const auto& [bits, n] : a) {
    EXPECT_EQ(bits.size(), 4u);
    total += n;
  }
  EXPECT_EQ(total, 777u);
  // Shot k does not depend on how many shots follow it.
  const Counts one = measure_group(s, label, 1, 42);
  const Counts two = measure_group(s, label, 2, 42);
  EXPECT_TRUE(two.count(one.begin()->first));
}

TEST(measure_group, pair_frequency_within_three_sigma) {
  const double theta = 0.7 * kPi;
  const std::uint64_t shots = 100000;
  const Counts counts = measure_group(chain_state(2, theta), PauliString::from_str("ZZ"), shots, 5);
  const double p = std::pow(std::cos(theta / 2), 2);
  const double sigma = std::sqrt(p * (1 - p) / shots);
  const double freq = counts.count("10") ? static_cast<double>(counts.at("10")) / shots : 0.0;
  EXPECT_NEAR(freq, p, 3 * sigma);
}

TEST(measure_group, rejects_bad_input) {
  const PairProductState s = chain_state(2, 1.0);
  EXPECT_THROW(measure_group(s, PauliString::from_str("ZZ"), 0, 1), std::invalid_argument);
  EXPECT_THROW(measure_group(s, PauliString::from_str("ZZZ"), 10, 1), QubitCountMismatch);
}

TEST(expectations_from_counts, parity_examples) {
  const PauliString zz = PauliString::from_str("ZZ");
  const PauliString ii = PauliString::from_str("II");
  const std::vector<PauliString> members = {zz, ii};
  auto e = expectations_from_counts({{"01", 100}}, zz, members);
  EXPECT_EQ(e.at(zz), -1.0);
  EXPECT_EQ(e.at(ii), 1.0);
  e = expectations_from_counts({{"00", 50}, {"11", 50}}, zz, members);
  EXPECT_EQ(e.at(zz), 1.0);
  e = expectations_from_counts({{"00", 30}, {"01", 10}}, zz, members);
  EXPECT_DOUBLE_EQ(e.at(zz), 0.5);
}

TEST(expectations_from_counts, sub_strings_use_their_own_support) {
  const PauliString label = PauliString::from_str("XZY");
  const std::vector<PauliString> members = {PauliString::from_str("XII"),
                                            PauliString::from_str("IZY"),
                                            PauliString::from_str("XIY")};
  const Counts counts = {{"100", 3}, {"011", 1}};
  const auto e = expectations_from_counts(counts, label, members);
  EXPECT_DOUBLE_EQ(e.at(members[0]), (-3.0 + 1.0) / 4);
  EXPECT_DOUBLE_EQ(e.at(members[1]), (3.0 + 1.0) / 4);
  EXPECT_DOUBLE_EQ(e.at(members[2]), (-3.0 - 1.0) / 4);
}

TEST(expectations_from_counts, incompatible_member) {
  const std::vector<PauliString> members = {PauliString::from_str("XZ")};
  EXPECT_THROW(expectations_from_counts({{"00", 1}}, PauliString::from_str("ZZ"), members),
               IncompatibleMemberError);
}

TEST(sampled_estimates, within_four_sigma) {
  // Per-string estimates from counts scatter around the exact value with
  // binomial variance (1 - <P>^2) / shots.
  const MomentPlan plan = plan_2x3(3);
  const double theta = 0.8 * kPi;
  const PairProductState s = chain_state(6, theta);
  const std::uint64_t shots = 2000;
  const MeasurementStore store = measure_shots(s, plan.groups, shots, 99);
  std::size_t total = 0;
  std::size_t inside = 0;
  for (const auto& [p, value] : store.derived()) {
    const double exact = expectation_exact(s, p);
    const double sigma = std::sqrt(std::max(1.0 - exact * exact, 0.0) / shots);
    ++total;
    if (std::abs(value - exact) <= 4 * sigma + 1e-12) ++inside;
  }
  ASSERT_GT(total, 100u);
  EXPECT_GE(static_cast<double>(inside) / total, 0.99);
}

TEST(sampled_estimates, parity_consistency_across_groups) {
  // On a basis state every group reports the exact parity.
  const MomentPlan plan = plan_2x3(2);
  const PairProductState s = chain_state(6, kPi);
  const MeasurementStore store = measure_shots(s, plan.groups, 64, 3);
  for (const auto& [p, value] : store.derived()) {
    if (p.x_mask() != 0) continue;
    EXPECT_EQ(value, expectation_exact(s, p)) << p.str();
  }
}

TEST(damping, factors) {
  const PauliString p = PauliString::from_str("XIZ");
  EXPECT_NEAR(damping_factor(p, 0.1), 0.81, 1e-15);
  EXPECT_EQ(damping_factor(PauliString::from_str("III"), 0.3), 1.0);
  EXPECT_EQ(damping_factor(p, 0.0), 1.0);
  EXPECT_THROW(damping_factor(p, 1.0), std::invalid_argument);
  EXPECT_THROW(damping_factor(p, -0.1), std::invalid_argument);

  ExpectationMap m = {{p, 0.5}, {PauliString::from_str("III"), 1.0}};
  const auto damped = apply_damping_noise(m, 0.1);
  EXPECT_NEAR(damped.at(p), 0.405, 1e-15);
  EXPECT_EQ(damped.at(PauliString::from_str("III")), 1.0);
  EXPECT_EQ(apply_damping_noise(m, 0.0), m);
}

TEST(measurement_store, exact_store_values) {
  const MomentPlan plan = plan_2x3(2);
  const PairProductState s = chain_state(6, 1.2);
  const MeasurementStore store = measure_exact(s, plan.groups);
  EXPECT_TRUE(store.is_exact());
  for (const auto& power : plan.powers) {
    for (const auto& t : power.terms()) {
      EXPECT_EQ(store.expectation(t.string), expectation_exact(s, t.string));
    }
  }
  EXPECT_THROW(store.expectation(PauliString::from_str("XYZXYZ")), MissingStringError);
}

TEST(measurement_store, repeated_labels_share_counts) {
  const MomentPlan plan = plan_2x3(3);
  const PairProductState s = chain_state(6, 2.0);
  const MeasurementStore store = measure_shots(s, plan.groups, 128, 4);
  std::size_t listed = 0;
  for (const auto& rec : store.records()) {
    EXPECT_EQ(store.find_record(rec.label), &rec);
    listed += rec.members.size();
  }
  EXPECT_EQ(listed, store.size());
  // A label reused by a later order measures once.
  std::set<std::string> labels;
  for (const auto& rec : store.records()) EXPECT_TRUE(labels.insert(rec.label.str()).second);
}

TEST(measurement_store, first_record_wins) {
  MeasurementStore store(2, 0, 4);
  const PauliString z0 = PauliString::from_str("ZI");
  const std::vector<PauliString> members = {z0};
  store.add_record(PauliString::from_str("ZZ"), members, {{"00", 4}});
  store.add_record(PauliString::from_str("ZX"), members, {{"10", 4}});
  EXPECT_EQ(store.expectation(z0), 1.0);
  EXPECT_TRUE(store.find_record(PauliString::from_str("ZX"))->members.empty());
}

TEST(measurement_store, rejects_inconsistent_records) {
  MeasurementStore store(2, 0, 4);
  const std::vector<PauliString> members = {PauliString::from_str("ZZ")};
  EXPECT_THROW(store.add_record(PauliString::from_str("ZZ"), members, {{"00", 3}}),
               std::invalid_argument);
  store.add_record(PauliString::from_str("ZZ"), members, {{"00", 4}});
  EXPECT_THROW(store.add_record(PauliString::from_str("ZZ"), members, {{"01", 4}}),
               std::invalid_argument);
  const std::vector<PauliString> bad = {PauliString::from_str("XZ")};
  EXPECT_THROW(store.add_record(PauliString::from_str("ZZ"), bad, {{"00", 4}}),
               IncompatibleMemberError);
  EXPECT_THROW(store.set_expectation(PauliString::from_str("ZZ"), 0.1), std::logic_error);

  MeasurementStore exact(2, 0, 0);
  EXPECT_THROW(exact.add_record(PauliString::from_str("ZZ"), members, {{"00", 4}}),
               std::logic_error);
  EXPECT_THROW(exact.set_expectation(PauliString::from_str("ZZ"), 1.5), std::invalid_argument);
}

TEST(measurement_store, damped_copy) {
  const MomentPlan plan = plan_2x3(2);
  const PairProductState s = chain_state(6, 2.4);
  for (const MeasurementStore& store :
       {measure_exact(s, plan.groups), measure_shots(s, plan.groups, 256, 8)}) {
    const MeasurementStore d = store.damped(0.05);
    EXPECT_EQ(d.damping(), 0.05);
    for (const auto& [p, v] : store.derived()) {
      EXPECT_DOUBLE_EQ(d.expectation(p), v * std::pow(0.95, p.weight()));
    }
  }
}

TEST(measurement_store, resample_keeps_shots_and_varies) {
  const MomentPlan plan = plan_2x3(2);
  const MeasurementStore store = measure_shots(chain_state(6, 2.0), plan.groups, 300, 2);
  const MeasurementStore a = store.resampled(10);
  const MeasurementStore b = store.resampled(10);
  const MeasurementStore c = store.resampled(11);
  ASSERT_EQ(a.records().size(), store.records().size());
  bool differs = false;
  for (std::size_t k = 0; k < a.records().size(); ++k) {
    std::uint64_t total = 0;
    for (const auto& [bits, n] : a.records()[k].counts) {
      total += n;
      EXPECT_TRUE(store.records()[k].counts.count(bits));
    }
    EXPECT_EQ(total, 300u);
    EXPECT_EQ(a.records()[k].counts, b.records()[k].counts);
    if (a.records()[k].counts != c.records()[k].counts) differs = true;
  }
  EXPECT_TRUE(differs);
}

TEST(measurement_store, json_round_trip) {
  const MomentPlan plan = plan_2x3(3);
  const PairProductState s = chain_state(6, 2.2);
  for (const MeasurementStore& store :
       {measure_exact(s, plan.groups), measure_shots(s, plan.groups, 512, 6),
        measure_shots(s, plan.groups, 64, 7).damped(0.02)}) {
    const auto j = io::to_json(store);
    const MeasurementStore back = io::store_from_json(io::json::parse(j.dump()));
    EXPECT_EQ(back.size(), store.size());
    EXPECT_EQ(back.shots_per_group(), store.shots_per_group());
    EXPECT_EQ(back.damping(), store.damping());
    for (const auto& [p, v] : store.derived()) EXPECT_EQ(back.expectation(p), v) << p.str();
    EXPECT_EQ(io::to_json(back), j);
  }
}
