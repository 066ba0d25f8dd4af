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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "qcm/grouping.hpp"
#include "qcm/models.hpp"
#include "qcm/pauli.hpp"
#include "qcm/state.hpp"

namespace qcm {

/// Outcome bitstring (character m is qubit m) to number of occurrences.
using Counts = std::map<std::string, std::uint64_t>;

using ExpectationMap = std::unordered_map<PauliString, double, PauliStringHash>;

inline constexpr std::size_t kStatevectorQubitLimit = 22;

double expectation_exact(const PairProductState& state, const PauliString& p);

/// Trial state amplitudes built by applying the trial circuit gate by gate to
/// a dense register. Throws GuardError above kStatevectorQubitLimit.
std::vector<cplx> trial_statevector(const TrialStateSpec& spec);

/// <psi|P|psi> on a dense register of 2^q amplitudes.
double expectation_dense(std::span<const cplx> psi, const PauliString& p);

/// Statevector backend for the chain-paired trial state at angle theta.
double expectation_statevector(double theta, std::size_t num_qubits,
                               const PauliString& p);

/**
 * Samples `shots` outcomes of measuring every qubit in the basis of the
 * label's letter (X after a Hadamard, Y after S-dagger then Hadamard, Z and
 * identity directly). Blocks of the product state are sampled independently.
 * Shot k of the group draws from the stream keyed by (seed, label, k).
 */
Counts measure_group(const PairProductState& state, const PauliString& label,
                     std::uint64_t shots, std::uint64_t seed);

/// Parity estimates of each member from counts taken in the label's basis.
/// Throws IncompatibleMemberError for a member the label does not measure.
ExpectationMap expectations_from_counts(const Counts& counts,
                                        const PauliString& label,
                                        std::span<const PauliString> members);

/// Multiplies each expectation by (1 - lambda)^weight. lambda in [0, 1).
ExpectationMap apply_damping_noise(const ExpectationMap& expectations,
                                   double lambda);
double damping_factor(const PauliString& p, double lambda);

/**
 * Measurement record for one trial state, keyed by group label.
 *
 * A sampled store keeps counts per label and derives each string's
 * expectation from the first record (in insertion order) whose members list
 * it. An exact store (shots_per_group == 0) carries expectations directly.
 * The derived expectations are what moments are assembled from, so one store
 * serves every order n and every coupling set over the same strings.
 */
class MeasurementStore {
 public:
  struct Record {
    PauliString label;
    std::vector<PauliString> members;
    Counts counts;
  };

  MeasurementStore() = default;
  MeasurementStore(std::size_t num_qubits, std::uint64_t seed,
                   std::uint64_t shots_per_group);

  std::size_t num_qubits() const { return num_qubits_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t shots_per_group() const { return shots_; }
  bool is_exact() const { return shots_ == 0; }
  std::optional<double> theta() const { return theta_; }
  void set_theta(double theta) { theta_ = theta; }
  /// Damping applied to every derived expectation (0 when undamped).
  double damping() const { return lambda_; }

  /// Adds (or extends) the record for `label`. Members already derived from
  /// an earlier record keep that estimate.
  void add_record(const PauliString& label, std::span<const PauliString> members,
                  Counts counts);
  /// Exact stores only.
  void set_expectation(const PauliString& p, double value);

  const std::vector<Record>& records() const { return records_; }
  const Record* find_record(const PauliString& label) const;
  const ExpectationMap& derived() const { return derived_; }
  std::size_t size() const { return derived_.size(); }
  bool contains(const PauliString& p) const { return derived_.count(p) != 0; }

  /// Throws MissingStringError when p was never measured.
  double expectation(const PauliString& p) const;

  /// Same store with every derived expectation damped by (1 - lambda)^weight.
  MeasurementStore damped(double lambda) const;

  /// Multinomial resample of every record's counts (same shots per record).
  MeasurementStore resampled(std::uint64_t key) const;

 private:
  void derive_record(std::size_t index, std::span<const PauliString> fresh);

  std::size_t num_qubits_ = 0;
  std::uint64_t seed_ = 0;
  std::uint64_t shots_ = 0;
  std::optional<double> theta_;
  double lambda_ = 0.0;
  std::vector<Record> records_;
  std::unordered_map<PauliString, std::size_t, PauliStringHash> record_index_;
  ExpectationMap derived_;
};

/// Exact store holding <P> for every member of every group.
MeasurementStore measure_exact(const PairProductState& state,
                               std::span<const std::vector<TPBGroup>> groups_by_order);

/// Sampled store: each distinct label is measured once with `shots` shots.
MeasurementStore measure_shots(const PairProductState& state,
                               std::span<const std::vector<TPBGroup>> groups_by_order,
                               std::uint64_t shots, std::uint64_t seed);

}  // namespace qcm
