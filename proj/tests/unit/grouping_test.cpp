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

#include <random>
#include <set>

#include "gtest/gtest.h"

#include "qcm/models.hpp"

using namespace qcm;

namespace {

std::vector<PauliString> parse_all(std::initializer_list<const char*> letters) {
  std::vector<PauliString> out;
  for (const char* s : letters) out.push_back(PauliString::from_str(s));
  return out;
}

// Every input lands in exactly one group whose label measures it, and each
// label is the union of its members' letters.
void expect_valid_partition(std::span<const PauliString> strings,
                            const std::vector<TPBGroup>& groups) {
  std::multiset<std::string> seen;
  for (const auto& g : groups) {
    ASSERT_FALSE(g.members.empty());
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    for (const auto& m : g.members) {
      EXPECT_TRUE(qwc(m, g.label)) << m.str() << " vs " << g.label.str();
      seen.insert(m.str());
      x |= m.x_mask();
      z |= m.z_mask();
    }
    EXPECT_EQ(g.label.x_mask(), x);
    EXPECT_EQ(g.label.z_mask(), z);
    for (std::size_t a = 0; a < g.members.size(); ++a) {
      for (std::size_t b = a + 1; b < g.members.size(); ++b) {
        EXPECT_TRUE(qwc(g.members[a], g.members[b]));
      }
    }
  }
  std::multiset<std::string> expect;
  for (const auto& s : strings) expect.insert(s.str());
  EXPECT_EQ(seen, expect);
}

}  // namespace

TEST(qwc, examples) {
  EXPECT_TRUE(qwc(PauliString::from_str("XIZ"), PauliString::from_str("XZI")));
  EXPECT_FALSE(qwc(PauliString::from_str("XX"), PauliString::from_str("ZZ")));
  EXPECT_TRUE(qwc(PauliString::from_str("III"), PauliString::from_str("XYZ")));
  EXPECT_TRUE(qwc(PauliString::from_str("YYY"), PauliString::from_str("YYY")));
  EXPECT_FALSE(qwc(PauliString::from_str("IYX"), PauliString::from_str("IYZ")));
}

TEST(qwc, symmetric_and_positionwise) {
  std::mt19937_64 gen(1);
  for (int t = 0; t < 500; ++t) {
    std::string a;
    std::string b;
    for (int m = 0; m < 8; ++m) {
      a += "IXYZ"[gen() % 4];
      b += "IXYZ"[gen() % 4];
    }
    bool expect = true;
    for (int m = 0; m < 8; ++m) {
      if (a[m] != 'I' && b[m] != 'I' && a[m] != b[m]) expect = false;
    }
    const auto pa = PauliString::from_str(a);
    const auto pb = PauliString::from_str(b);
    EXPECT_EQ(qwc(pa, pb), expect) << a << " " << b;
    EXPECT_EQ(qwc(pb, pa), expect);
  }
}

TEST(group_tpb, two_qubit_heisenberg_square) {
  const auto strings = parse_all({"II", "XX", "YY", "ZZ"});
  const auto groups = group_tpb(strings);
  ASSERT_EQ(groups.size(), 3u);
  expect_valid_partition(strings, groups);
  std::set<std::string> labels;
  for (const auto& g : groups) {
    labels.insert(g.label.str());
    if (g.label.str() == "XX" || g.label.str() == "YY" || g.label.str() == "ZZ") {
      continue;
    }
    ADD_FAILURE() << "unexpected label " << g.label.str();
  }
  EXPECT_EQ(labels, (std::set<std::string>{"XX", "YY", "ZZ"}));
}

TEST(group_tpb, single_string) {
  const auto strings = parse_all({"IXIZ"});
  const auto groups = group_tpb(strings);
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].label.str(), "IXIZ");
  EXPECT_EQ(groups[0].members, strings);
}

TEST(group_tpb, identity_only) {
  const auto strings = parse_all({"III"});
  const auto groups = group_tpb(strings);
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_TRUE(groups[0].label.is_identity());
}

TEST(group_tpb, empty_input) {
  EXPECT_TRUE(group_tpb(std::vector<PauliString>{}).empty());
}

TEST(group_tpb, random_sets_partition) {
  std::mt19937_64 gen(21);
  for (int t = 0; t < 40; ++t) {
    const std::size_t q = 2 + gen() % 10;
    std::set<std::string> unique;
    const std::size_t count = 1 + gen() % 200;
    for (std::size_t k = 0; k < count; ++k) {
      std::string s;
      for (std::size_t m = 0; m < q; ++m) s += "IXYZ"[gen() % 4];
      unique.insert(s);
    }
    std::vector<PauliString> strings;
    for (const auto& s : unique) strings.push_back(PauliString::from_str(s));
    const auto groups = group_tpb(strings);
    EXPECT_LE(groups.size(), strings.size());
    expect_valid_partition(strings, groups);
  }
}

TEST(group_tpb, hamiltonian_powers_partition) {
  const std::size_t dims[2] = {2, 3};
  const LatticeGraph g = build_lattice(LatticeKind::Square, dims);
  const auto powers = hamiltonian_powers(build_hamiltonian(g, uniform_couplings(g)), 4);
  for (const auto& p : powers) {
    const auto strings = p.strings();
    const auto groups = group_tpb(strings);
    expect_valid_partition(strings, groups);
  }
}

TEST(assign_tpb, agrees_with_groups_and_is_deterministic) {
  const std::size_t dims[2] = {3, 3};
  const LatticeGraph g = build_lattice(LatticeKind::Square, dims);
  const auto strings = hamiltonian_power(build_hamiltonian(g, uniform_couplings(g)), 3).strings();
  const GroupAssignment a = assign_tpb(strings);
  const GroupAssignment b = assign_tpb(strings);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.group_of, b.group_of);
  ASSERT_EQ(a.group_of.size(), strings.size());
  for (std::size_t i = 0; i < strings.size(); ++i) {
    ASSERT_LT(a.group_of[i], a.labels.size());
    EXPECT_TRUE(qwc(strings[i], a.labels[a.group_of[i]]));
  }
}

TEST(scaling_report, chain_q2_second_power) {
  const std::size_t qs[1] = {2};
  const auto rows = scaling_report(LatticeKind::Chain, qs, 2);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].num_qubits, 2u);
  EXPECT_EQ(rows[0].raw, 4u);
  EXPECT_EQ(rows[0].groups, 3u);
}

TEST(scaling_report, first_power_counts_three_per_edge) {
  const std::size_t qs[3] = {4, 6, 9};
  const auto rows = scaling_report(LatticeKind::Square, qs, 1);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    const LatticeGraph g = lattice_for_qubits(LatticeKind::Square, r.num_qubits);
    EXPECT_EQ(r.raw, 3 * g.edges.size());
    EXPECT_LE(r.groups, r.raw);
  }
  const std::size_t chain_q[1] = {10};
  const auto chain = scaling_report(LatticeKind::Chain, chain_q, 1);
  EXPECT_EQ(chain[0].raw, 27u);
}
