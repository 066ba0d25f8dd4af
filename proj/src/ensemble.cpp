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

#include "qcm/ensemble.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "qcm/errors.hpp"
#include "qcm/oracle.hpp"
#include "qcm/pipeline.hpp"
#include "qcm/rng.hpp"

namespace qcm {

CouplingSet generic_couplings(const LatticeGraph& graph, std::uint64_t seed) {
  const rng::Stream stream(rng::derive(seed, "generic-couplings"));
  auto draw = [&](std::uint64_t counter) { return 0.1 + 0.8 * stream.uniform_at(counter); };
  CouplingSet out;
  out.reserve(graph.edges.size());
  for (std::uint64_t e = 0; e < graph.edges.size(); ++e) {
    out.push_back({draw(3 * e), draw(3 * e + 1), draw(3 * e + 2)});
  }
  return out;
}

MeasurementStore build_recycling_store(const LatticeGraph& graph, double theta,
                                       const StoreOptions& options) {
  const WeightedPauliSum h =
      build_hamiltonian(graph, generic_couplings(graph, options.seed));
  const MomentPlan plan = make_plan(h, options.nmax);
  const PairProductState state = trial_state(chain_trial_spec(graph.num_qubits, theta));
  MeasurementStore store = options.shots == 0
                               ? measure_exact(state, plan.groups)
                               : measure_shots(state, plan.groups, options.shots, options.seed);
  store.set_theta(theta);
  return store;
}

RecycledEstimate recycle_estimate(const MeasurementStore& store, const LatticeGraph& graph,
                                  const CouplingSet& couplings, double theta, int nmax) {
  if (store.num_qubits() != graph.num_qubits) {
    throw QubitCountMismatch(graph.num_qubits, store.num_qubits());
  }
  if (store.theta() && std::abs(*store.theta() - theta) > 1e-12) {
    throw std::invalid_argument(fmt::format(
        "store was measured at theta {} but {} was requested", *store.theta(), theta));
  }
  const WeightedPauliSum h = build_hamiltonian(graph, couplings);
  const std::vector<WeightedPauliSum> powers = hamiltonian_powers(h, nmax);
  const EstimateRecord rec = estimate_from_moments(theta, assemble_moments(powers, store));
  return {rec.variational, rec.infinum};
}

EnsembleResult run_ensemble(const LatticeGraph& graph, double theta,
                            std::size_t instance_count, std::uint64_t master_seed,
                            const MeasurementStore& store, const EnsembleOptions& options) {
  EnsembleResult result;
  result.instances.reserve(instance_count);
  const bool with_exact =
      options.attach_exact && graph.num_qubits <= kIterativeQubitLimit;
  const std::uint64_t root = rng::derive(master_seed, "ensemble");
  for (std::size_t i = 0; i < instance_count; ++i) {
    InstanceRecord rec;
    rec.seed = rng::derive(root, std::uint64_t{i});
    const CouplingSet couplings = sample_couplings(graph, rec.seed);
    rec.digest = coupling_digest(couplings);
    const RecycledEstimate est = recycle_estimate(store, graph, couplings, theta, options.nmax);
    rec.variational = est.variational.value;
    if (est.infinum) rec.infinum = est.infinum->value;
    if (with_exact) rec.exact = exact_ground_energy(build_hamiltonian(graph, couplings));
    result.instances.push_back(std::move(rec));
  }

  EnsembleSummary& s = result.summary;
  std::size_t n_inf = 0;
  double exact_sum = 0, var_err = 0, inf_err = 0;
  std::size_t n_exact = 0, n_both = 0;
  for (const auto& rec : result.instances) {
    s.mean_variational += rec.variational;
    if (rec.infinum) {
      s.mean_infinum += *rec.infinum;
      ++n_inf;
    } else {
      ++s.undefined_infinum;
    }
    if (rec.exact) {
      exact_sum += *rec.exact;
      ++n_exact;
      if (rec.infinum) {
        var_err += std::abs(rec.variational - *rec.exact);
        inf_err += std::abs(*rec.infinum - *rec.exact);
        ++n_both;
      }
    }
  }
  if (!result.instances.empty()) s.mean_variational /= result.instances.size();
  if (n_inf > 0) s.mean_infinum /= n_inf;
  if (n_exact > 0) s.mean_exact = exact_sum / n_exact;
  if (n_both > 0) {
    s.mean_abs_variational_error = var_err / n_both;
    s.mean_abs_infinum_error = inf_err / n_both;
  }
  return result;
}

Histogram make_histogram(const std::vector<double>& values, double lo, double hi,
                         std::size_t bins) {
  if (bins == 0 || !(hi > lo)) throw std::invalid_argument("histogram needs lo < hi and bins > 0");
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k) {
    h.edges[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(bins);
  }
  h.counts.assign(bins, 0);
  for (double v : values) {
    if (v < lo) {
      ++h.underflow;
    } else if (v > hi) {
      ++h.overflow;
    } else {
      auto k = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
      if (k >= bins) k = bins - 1;
      ++h.counts[k];
    }
  }
  return h;
}

}  // namespace qcm
