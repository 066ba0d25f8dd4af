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

#include "qcm/estimator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "qcm/errors.hpp"
#include "qcm/rng.hpp"

namespace qcm {

namespace {

constexpr double kZTolerance = 1e-10;
constexpr int kMaxBisections = 400;
constexpr int kScanPoints = 4096;

struct Series {
  double c1 = 0, c2 = 0;
  double a1 = 0;  // z coefficient of alpha
  double a2 = 0;  // z^2 coefficient of alpha (order 2 only)
  double k = 0;   // z^2 coefficient of beta^2
};

Series series(const CumulantVector& c, int z_order) {
  if (z_order != 1 && z_order != 2) {
    throw std::invalid_argument(fmt::format("z_order must be 1 or 2, got {}", z_order));
  }
  if (c.nmax() < 4) throw std::invalid_argument("infinum needs cumulants c1..c4");
  if (z_order == 2 && c.nmax() < 5) {
    throw std::invalid_argument("second-order z series needs c5");
  }
  Series s;
  s.c1 = c.c(1);
  s.c2 = c.c(2);
  const double c3 = c.c(3);
  const double c4 = c.c(4);
  s.a1 = c3 / s.c2;
  if (z_order == 2) {
    const double c5 = c.c(5);
    s.a2 = (3 * c3 * c3 * c3 - 4 * s.c2 * c3 * c4 + s.c2 * s.c2 * c5) /
           (4 * std::pow(s.c2, 4));
  }
  s.k = (s.c2 * c4 - c3 * c3) / (2 * s.c2 * s.c2);
  return s;
}

double objective(const Series& s, double z) {
  const double beta2 = z * s.c2 + z * z * s.k;
  if (beta2 < 0) return std::numeric_limits<double>::quiet_NaN();
  return s.c1 + z * s.a1 + z * z * s.a2 - 2 * std::sqrt(beta2);
}

double slope(const Series& s, double z) {
  const double beta2 = z * s.c2 + z * z * s.k;
  const double dbeta2 = s.c2 + 2 * s.k * z;
  return s.a1 + 2 * s.a2 * z - dbeta2 / std::sqrt(beta2);
}

EnergyEstimate numeric_result(const Series& s, int z_order, double z) {
  EnergyEstimate e;
  e.value = objective(s, z);
  e.method = EstimateMethod::InfinumNumericZ;
  e.z_order = z_order;
  e.z_star = z;
  return e;
}

// Root of the increasing slope on (lo, hi) where slope(lo) < 0 < slope(hi).
double bisect_slope(const Series& s, double lo, double hi) {
  for (int it = 0; it < kMaxBisections && hi - lo >= kZTolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double d = slope(s, mid);
    if (std::isnan(d) || d > 0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double golden_section(const Series& s, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1) / 2;
  double a = hi - inv_phi * (hi - lo);
  double b = lo + inv_phi * (hi - lo);
  double fa = objective(s, a);
  double fb = objective(s, b);
  for (int it = 0; it < kMaxBisections && hi - lo >= kZTolerance; ++it) {
    if (fa <= fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = objective(s, a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = objective(s, b);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string to_string(EstimateMethod method) {
  switch (method) {
    case EstimateMethod::Variational: return "variational";
    case EstimateMethod::InfinumAnalytic: return "infinum-analytic";
    case EstimateMethod::InfinumNumericZ: return "infinum-numeric-z";
  }
  return "unknown";
}

std::string to_string(Fallback fallback) {
  switch (fallback) {
    case Fallback::None: return "none";
    case Fallback::Eigenstate: return "eigenstate";
    case Fallback::NumericZ: return "numeric-z";
  }
  return "unknown";
}

MomentVector assemble_moments(std::span<const WeightedPauliSum> powers,
                              const std::function<double(const PauliString&)>& lookup,
                              Provenance provenance) {
  MomentVector m;
  m.provenance = provenance;
  m.values.reserve(powers.size());
  for (const WeightedPauliSum& hn : powers) {
    double acc = 0.0;
    for (const auto& term : hn.terms()) acc += term.weight * lookup(term.string);
    m.values.push_back(acc);
  }
  return m;
}

MomentVector assemble_moments(std::span<const WeightedPauliSum> powers,
                              const MeasurementStore& store) {
  return assemble_moments(
      powers, [&store](const PauliString& p) { return store.expectation(p); },
      store.is_exact() && store.damping() == 0.0 ? Provenance::Exact
                                                 : Provenance::Sampled);
}

MomentVector assemble_moments(std::span<const WeightedPauliSum> powers,
                              const ExpectationMap& expectations) {
  return assemble_moments(
      powers,
      [&expectations](const PauliString& p) {
        auto it = expectations.find(p);
        if (it == expectations.end()) throw MissingStringError(p.str());
        return it->second;
      },
      Provenance::Exact);
}

MomentVector assemble_moments(std::span<const WeightedPauliSum> powers,
                              const PairProductState& state) {
  return assemble_moments(
      powers, [&state](const PauliString& p) { return state.expectation(p); },
      Provenance::Exact);
}

CumulantVector cumulants(const MomentVector& m) {
  const int nmax = m.nmax();
  CumulantVector c;
  c.provenance = m.provenance;
  c.values.reserve(nmax);
  for (int n = 1; n <= nmax; ++n) {
    double value = m[n];
    double binom = 1.0;  // C(n-1, p)
    for (int p = 0; p <= n - 2; ++p) {
      value -= binom * c.values[p] * m[n - 1 - p];
      binom = binom * (n - 1 - p) / (p + 1);
    }
    c.values.push_back(value);
  }
  return c;
}

double eigenstate_guard(const CumulantVector& c) {
  const double c1 = c.c(1);
  return 1e-10 * (1 + c1 * c1);
}

double denominator_guard(const CumulantVector& c) {
  const double c2 = c.c(2);
  return 1e-12 * (1 + c2 * c2);
}

EnergyEstimate infinum_estimate(const CumulantVector& c) {
  if (c.nmax() < 4) throw std::invalid_argument("infinum needs cumulants c1..c4");
  const double c1 = c.c(1);
  const double c2 = c.c(2);
  const double c3 = c.c(3);
  const double c4 = c.c(4);
  if (c2 <= eigenstate_guard(c)) {
    EnergyEstimate e;
    e.value = c1;
    e.method = EstimateMethod::InfinumAnalytic;
    e.fallback = Fallback::Eigenstate;
    return e;
  }
  const double den = c3 * c3 - c2 * c4;
  const double radicand = 3 * c3 * c3 - 2 * c2 * c4;
  const bool regular = radicand >= 0 && std::abs(den) > denominator_guard(c) &&
                       (den > 0 || c3 > 0);
  if (!regular) {
    EnergyEstimate e = infinum_numeric_z(c, 1);
    e.fallback = Fallback::NumericZ;
    return e;
  }
  EnergyEstimate e;
  e.value = c1 - c2 * c2 / den * (std::sqrt(radicand) - c3);
  e.method = EstimateMethod::InfinumAnalytic;
  return e;
}

double infinum_objective(const CumulantVector& c, int z_order, double z) {
  return objective(series(c, z_order), z);
}

EnergyEstimate infinum_numeric_z(const CumulantVector& c, int z_order) {
  if (c.nmax() >= 2 && c.c(2) <= eigenstate_guard(c)) {
    EnergyEstimate e;
    e.value = c.c(1);
    e.method = EstimateMethod::InfinumNumericZ;
    e.z_order = z_order;
    e.fallback = Fallback::Eigenstate;
    return e;
  }
  const Series s = series(c, z_order);
  const bool bounded_domain = s.k < 0;
  const double zmax = bounded_domain ? -s.c2 / s.k : 0.0;

  if (s.a2 >= 0) {
    // Convex objective: its slope rises from -infinity at z = 0.
    double hi;
    if (bounded_domain) {
      hi = zmax;
    } else {
      if (s.a2 == 0 && s.a1 - 2 * std::sqrt(s.k) <= 0) {
        throw DomainError("infinum objective decreases without bound in z");
      }
      hi = 1.0;
      int doublings = 0;
      while (!(slope(s, hi) > 0)) {
        hi *= 2;
        if (++doublings > 2000 || !std::isfinite(hi)) {
          throw DomainError("infinum objective has no finite minimizer");
        }
      }
    }
    return numeric_result(s, z_order, bisect_slope(s, 0.0, hi));
  }

  // Concave alpha: the infimum is finite only on a bounded domain.
  if (!bounded_domain) {
    throw DomainError("second-order alpha term makes the objective unbounded below");
  }
  const double step = zmax / kScanPoints;
  int best = 1;
  double best_value = objective(s, step);
  for (int i = 2; i < kScanPoints; ++i) {
    const double v = objective(s, i * step);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  return numeric_result(s, z_order, golden_section(s, (best - 1) * step, (best + 1) * step));
}

EnergyEstimate variational_estimate(const CumulantVector& c) {
  EnergyEstimate e;
  e.value = c.c(1);
  e.method = EstimateMethod::Variational;
  return e;
}

BootstrapResult bootstrap_estimates(std::span<const WeightedPauliSum> powers,
                                    const MeasurementStore& store,
                                    std::size_t resamples, std::uint64_t seed) {
  BootstrapResult out;
  if (store.is_exact()) return out;
  const std::uint64_t root = rng::derive(seed, "bootstrap");
  std::vector<double> variational, infinum;
  for (std::size_t r = 0; r < resamples; ++r) {
    const MeasurementStore sample = store.resampled(rng::derive(root, std::uint64_t{r}));
    const CumulantVector c = cumulants(assemble_moments(powers, sample));
    variational.push_back(c.c(1));
    try {
      infinum.push_back(infinum_estimate(c).value);
    } catch (const DomainError&) {
      ++out.failures;
    }
  }
  auto sd = [](const std::vector<double>& v) {
    if (v.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    double mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
  };
  out.resamples = resamples;
  out.variational_sd = sd(variational);
  out.infinum_sd = sd(infinum);
  return out;
}

}  // namespace qcm
