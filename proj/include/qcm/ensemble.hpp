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
#include <optional>
#include <string>
#include <vector>

#include "qcm/engine.hpp"
#include "qcm/estimator.hpp"
#include "qcm/models.hpp"

namespace qcm {

/// Couplings drawn continuously from [0.1, 0.9), so no power of H loses a
/// string to an accidental cancellation.
CouplingSet generic_couplings(const LatticeGraph& graph, std::uint64_t seed);

/// Options for building a recycling store.
struct StoreOptions {
  int nmax = 4;
  std::uint64_t shots = 0;  // 0 = exact expectations
  std::uint64_t seed = 0;
};

/// Measures the union string set of the generic-coupling H^1..H^nmax on
/// `graph` in the chain-paired trial state at theta.
MeasurementStore build_recycling_store(const LatticeGraph& graph, double theta,
                                       const StoreOptions& options);

struct RecycledEstimate {
  EnergyEstimate variational;
  std::optional<EnergyEstimate> infinum;
};

/// Re-weights the stored expectations for new couplings; no sampling.
/// Throws MissingStringError when the store lacks a needed string and
/// std::invalid_argument when the store was taken at another theta.
RecycledEstimate recycle_estimate(const MeasurementStore& store, const LatticeGraph& graph,
                                  const CouplingSet& couplings, double theta,
                                  int nmax = 4);

struct InstanceRecord {
  std::uint64_t seed = 0;
  std::string digest;
  double variational = 0.0;
  std::optional<double> infinum;
  std::optional<double> exact;
};

struct EnsembleSummary {
  double mean_variational = 0.0;
  double mean_infinum = 0.0;
  std::optional<double> mean_exact;
  std::optional<double> mean_abs_variational_error;
  std::optional<double> mean_abs_infinum_error;
  std::size_t undefined_infinum = 0;
};

struct EnsembleResult {
  std::vector<InstanceRecord> instances;
  EnsembleSummary summary;
};

struct EnsembleOptions {
  int nmax = 4;
  bool attach_exact = true;  // only applied up to kIterativeQubitLimit qubits
};

/// Instance i samples its couplings with seed derive(master_seed, i).
EnsembleResult run_ensemble(const LatticeGraph& graph, double theta,
                            std::size_t instance_count, std::uint64_t master_seed,
                            const MeasurementStore& store,
                            const EnsembleOptions& options = {});

struct Histogram {
  std::vector<double> edges;  // bins.size() + 1 ascending edges
  std::vector<std::size_t> counts;
  std::size_t underflow = 0;
  std::size_t overflow = 0;
};

/// Bins are [edges[k], edges[k+1]); the last bin also takes its upper edge.
Histogram make_histogram(const std::vector<double>& values, double lo, double hi,
                         std::size_t bins);

/// Fixed bin edges used for ensemble energy histograms.
inline constexpr double kHistogramLow = -2.0;
inline constexpr double kHistogramHigh = 0.5;
inline constexpr std::size_t kHistogramBins = 100;

}  // namespace qcm
