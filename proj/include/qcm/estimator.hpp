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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcm/engine.hpp"
#include "qcm/pauli.hpp"
#include "qcm/state.hpp"

namespace qcm {

enum class Provenance { Exact, Sampled };

/// <H^1> .. <H^nmax>; <H^0> = 1 is implicit.
struct MomentVector {
  std::vector<double> values;
  Provenance provenance = Provenance::Exact;

  int nmax() const { return static_cast<int>(values.size()); }
  /// <H^n>, with n = 0 giving 1.
  double operator[](int n) const { return n == 0 ? 1.0 : values.at(n - 1); }
};

/// c_1 .. c_nmax.
struct CumulantVector {
  std::vector<double> values;
  Provenance provenance = Provenance::Exact;

  int nmax() const { return static_cast<int>(values.size()); }
  /// c_n for n >= 1.
  double c(int n) const { return values.at(n - 1); }
};

enum class EstimateMethod { Variational, InfinumAnalytic, InfinumNumericZ };
enum class Fallback { None, Eigenstate, NumericZ };

std::string to_string(EstimateMethod method);
std::string to_string(Fallback fallback);

struct EnergyEstimate {
  double value = 0.0;
  EstimateMethod method = EstimateMethod::Variational;
  int z_order = 0;             // numeric-z only
  std::optional<double> z_star;
  Fallback fallback = Fallback::None;
};

/// <H^n> = sum_j A_j^(n) <P_j^(n)> for n = 1..powers.size(). The lookup is
/// called once per string and may throw MissingStringError.
MomentVector assemble_moments(std::span<const WeightedPauliSum> powers,
                              const std::function<double(const PauliString&)>& lookup,
                              Provenance provenance);
MomentVector assemble_moments(std::span<const WeightedPauliSum> powers,
                              const MeasurementStore& store);
MomentVector assemble_moments(std::span<const WeightedPauliSum> powers,
                              const ExpectationMap& expectations);
/// Exact moments straight from the product state, no store involved.
MomentVector assemble_moments(std::span<const WeightedPauliSum> powers,
                              const PairProductState& state);

/// c_n = <H^n> - sum_{p=0}^{n-2} C(n-1, p) c_{p+1} <H^{n-1-p}>.
CumulantVector cumulants(const MomentVector& m);

/// Degeneracy guards of the analytic infinum form.
double eigenstate_guard(const CumulantVector& c);   // on c2
double denominator_guard(const CumulantVector& c);  // on c3^2 - c2 c4

/**
 * Fourth-order infinum estimate
 *   E = c1 - c2^2 / (c3^2 - c2 c4) * (sqrt(3 c3^2 - 2 c2 c4) - c3).
 *
 * Returns c1 (fallback eigenstate) when c2 is within the eigenstate guard.
 * The closed form is the stationary point of the first-order z-series; it is
 * used where that point is the infimum, i.e. when c3^2 - c2 c4 is positive,
 * or negative with c3 > 0 and a non-negative radicand. Elsewhere the numeric
 * first-order minimization is used (fallback numeric-z). Throws DomainError
 * when that has no finite infimum either.
 */
EnergyEstimate infinum_estimate(const CumulantVector& c);

/**
 * inf over z > 0 of alpha(z) - 2 beta(z) with
 *   alpha(z)   = c1 + z c3/c2 [+ z^2 (3 c3^3 - 4 c2 c3 c4 + c2^2 c5) / (4 c2^4)]
 *   beta^2(z)  = z c2 + z^2 (c2 c4 - c3^2) / (2 c2^2),
 * the bracketed term included for z_order 2 (needs c5), restricted to
 * beta^2 >= 0 and located to |dz| < 1e-10. Eigenstate cumulants return c1.
 * Throws DomainError when the infimum is not attained at finite z.
 */
EnergyEstimate infinum_numeric_z(const CumulantVector& c, int z_order = 1);

EnergyEstimate variational_estimate(const CumulantVector& c);

/// f(z) = alpha(z) - 2 beta(z) of the given order; NaN outside the domain.
double infinum_objective(const CumulantVector& c, int z_order, double z);

struct BootstrapResult {
  double variational_sd = 0.0;
  double infinum_sd = 0.0;
  std::size_t resamples = 0;
  std::size_t failures = 0;  // resamples whose infinum was undefined
};

/// Spread of the estimates over multinomial resamples of the store's counts.
/// Exact stores give zero spread.
BootstrapResult bootstrap_estimates(std::span<const WeightedPauliSum> powers,
                                    const MeasurementStore& store,
                                    std::size_t resamples, std::uint64_t seed);

inline constexpr std::size_t kDefaultBootstrapResamples = 200;

}  // namespace qcm
