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

#include <cstdint>
#include <optional>
#include <vector>

#include "qcm/engine.hpp"
#include "qcm/estimator.hpp"
#include "qcm/grouping.hpp"
#include "qcm/pauli.hpp"

namespace qcm {

/// Everything fixed before any measurement: H, its powers and their groups.
struct MomentPlan {
  WeightedPauliSum hamiltonian;
  std::vector<WeightedPauliSum> powers;      // H^1 .. H^nmax
  std::vector<std::vector<TPBGroup>> groups;  // per order, same indexing
};

/// Expands H^1..H^nmax and groups each order (skipped when `group` is false).
MomentPlan make_plan(const WeightedPauliSum& h, int nmax, bool group = true);

/// One row of a sweep: estimates for a single trial state.
struct EstimateRecord {
  double theta = 0.0;
  MomentVector moments;
  CumulantVector cumulants;
  EnergyEstimate variational;
  std::optional<EnergyEstimate> infinum;  // empty when undefined
  double variational_err = 0.0;
  double infinum_err = 0.0;
};

/// Moments, cumulants and both estimates from any expectation source.
EstimateRecord estimate_from_moments(double theta, const MomentVector& moments);

/// Estimates from a store; for sampled stores the errors are bootstrap
/// standard deviations (zero resamples skips the bootstrap).
EstimateRecord estimate_from_store(const MomentPlan& plan, const MeasurementStore& store,
                                   double theta, std::size_t resamples,
                                   std::uint64_t seed);

}  // namespace qcm
