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

#include "qcm/pipeline.hpp"

#include <stdexcept>

#include "qcm/errors.hpp"

namespace qcm {

MomentPlan make_plan(const WeightedPauliSum& h, int nmax, bool group) {
  if (nmax < 1) throw std::invalid_argument("nmax must be at least 1");
  MomentPlan plan;
  plan.hamiltonian = h;
  plan.powers = hamiltonian_powers(h, nmax);
  if (group) {
    plan.groups.reserve(plan.powers.size());
    for (const auto& hn : plan.powers) {
      const std::vector<PauliString> strings = hn.strings();
      plan.groups.push_back(group_tpb(strings));
    }
  }
  return plan;
}

EstimateRecord estimate_from_moments(double theta, const MomentVector& moments) {
  EstimateRecord rec;
  rec.theta = theta;
  rec.moments = moments;
  rec.cumulants = cumulants(moments);
  rec.variational = variational_estimate(rec.cumulants);
  try {
    rec.infinum = infinum_estimate(rec.cumulants);
  } catch (const DomainError&) {
    rec.infinum.reset();
  }
  return rec;
}

EstimateRecord estimate_from_store(const MomentPlan& plan, const MeasurementStore& store,
                                   double theta, std::size_t resamples,
                                   std::uint64_t seed) {
  EstimateRecord rec = estimate_from_moments(theta, assemble_moments(plan.powers, store));
  if (!store.is_exact() && resamples > 0) {
    const BootstrapResult boot = bootstrap_estimates(plan.powers, store, resamples, seed);
    rec.variational_err = boot.variational_sd;
    rec.infinum_err = boot.infinum_sd;
  }
  return rec;
}

}  // namespace qcm
