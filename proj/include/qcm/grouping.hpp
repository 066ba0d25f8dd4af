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

#include "qcm/models.hpp"
#include "qcm/pauli.hpp"

namespace qcm {

/// True iff at every qubit the letters agree or one of them is identity.
bool qwc(const PauliString& a, const PauliString& b);

/// A tensor-product measurement basis and the strings it covers. The label
/// holds, per qubit, the letter shared by every member that acts there.
struct TPBGroup {
  PauliString label;
  std::vector<PauliString> members;
};

/// Group labels plus, for each input string (input order), its group index.
struct GroupAssignment {
  std::vector<PauliString> labels;
  std::vector<std::uint32_t> group_of;
};

/**
 * Greedy covering by measurement labels. Each round builds one label qubit by
 * qubit: the letter chosen at qubit m is the one carried by the largest
 * weight of still-uncovered strings that agree with the letters fixed so
 * far, where a string counts 3^-(u-1) and u is its number of qubits still
 * undecided (the chance that it survives the remaining choices). One pass of
 * coordinate ascent then maximizes the number of compatible strings, and
 * every uncovered string the label measures joins the group. Very large
 * inputs score a fixed hash-selected subset of the strings; coverage is
 * always checked against all of them.
 *
 * Every string lands in exactly one group. Labels are reported minimal: the
 * union of the members' letters. Deterministic for a given input sequence.
 */
GroupAssignment assign_tpb(std::span<const PauliString> strings);

/// Materialized groups; members keep their input order.
std::vector<TPBGroup> group_tpb(std::span<const PauliString> strings);

struct ScalingRow {
  std::size_t num_qubits = 0;
  std::size_t raw = 0;
  std::size_t groups = 0;
};

/// String counts of compressed H^n (uniform unit couplings) before and after
/// grouping for each requested register size of a lattice family.
std::vector<ScalingRow> scaling_report(LatticeKind family,
                                       std::span<const std::size_t> q_values,
                                       int n);

}  // namespace qcm
