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

#include "qcm/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "qcm/engine.hpp"
#include "qcm/errors.hpp"
#include "qcm/rng.hpp"

namespace qcm {

namespace {

inline double conj_if(double v) { return v; }
inline cplx conj_if(const cplx& v) { return std::conj(v); }
inline double real_part(double v) { return v; }
inline double real_part(const cplx& v) { return v.real(); }

template <typename T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  T acc{};
  for (std::size_t i = 0; i < a.size(); ++i) acc += conj_if(a[i]) * b[i];
  return acc;
}

template <typename T>
double norm(const std::vector<T>& a) {
  double acc = 0;
  for (const T& v : a) acc += std::norm(v);
  return std::sqrt(acc);
}

template <typename T>
T random_entry(const rng::Stream& stream, std::uint64_t i);
template <>
double random_entry<double>(const rng::Stream& stream, std::uint64_t i) {
  return stream.uniform_at(i) - 0.5;
}
template <>
cplx random_entry<cplx>(const rng::Stream& stream, std::uint64_t i) {
  return {stream.uniform_at(2 * i) - 0.5, stream.uniform_at(2 * i + 1) - 0.5};
}

// Lowest eigenvalue of the symmetric tridiagonal matrix (alpha, beta) and the
// last component of its eigenvector.
std::pair<double, double> tridiagonal_lowest(const std::vector<double>& alpha,
                                             const std::vector<double>& beta) {
  const auto k = static_cast<Eigen::Index>(alpha.size());
  Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), k);
  Eigen::VectorXd sub(std::max<Eigen::Index>(k - 1, 0));
  for (Eigen::Index i = 0; i + 1 < k; ++i) sub[i] = beta[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  return {solver.eigenvalues()[0], solver.eigenvectors()(k - 1, 0)};
}

// Lanczos for the lowest eigenvalue. With `keep_basis` every new vector is
// reorthogonalized against all previous ones; otherwise only three vectors
// are held.
template <typename T>
double lanczos_lowest(const SparseHamiltonian& h, const OracleOptions& options,
                      bool keep_basis) {
  const std::size_t dim = h.dimension();
  const rng::Stream stream(rng::derive(options.seed, "lanczos"));
  std::vector<T> v(dim), w(dim), prev(dim, T{});
  for (std::size_t i = 0; i < dim; ++i) v[i] = random_entry<T>(stream, i);
  {
    const double n0 = norm(v);
    for (T& x : v) x /= n0;
  }
  std::vector<std::vector<T>> basis;
  std::vector<double> alpha, beta;
  double last_ritz = 0;
  constexpr std::size_t kMaxBasis = 600;
  std::size_t cap = std::min(options.max_iterations, dim);
  if (keep_basis) cap = std::min(cap, kMaxBasis);
  for (std::size_t j = 0; j < cap; ++j) {
    if (keep_basis) basis.push_back(v);
    h.apply(std::span<const T>(v), std::span<T>(w));
    const double a = real_part(dot(v, w));
    alpha.push_back(a);
    const double b_prev = beta.empty() ? 0.0 : beta.back();
    for (std::size_t i = 0; i < dim; ++i) w[i] -= a * v[i] + b_prev * prev[i];
    if (keep_basis) {
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& u : basis) {
          const T overlap = dot(u, w);
          for (std::size_t i = 0; i < dim; ++i) w[i] -= overlap * u[i];
        }
      }
    }
    const double b = norm(w);
    const auto [ritz, last] = tridiagonal_lowest(alpha, beta);
    const double scale = std::max(1.0, std::abs(ritz));
    if (b < 1e-13 * scale) return ritz;  // invariant subspace
    const bool settled = j > 0 && std::abs(ritz - last_ritz) <= 1e-13 * scale;
    if (std::abs(b * last) <= options.tolerance * 1e-2 * scale && settled) return ritz;
    last_ritz = ritz;
    beta.push_back(b);
    std::swap(prev, v);
    for (std::size_t i = 0; i < dim; ++i) v[i] = w[i] / b;
  }
  if (cap == dim && keep_basis) return tridiagonal_lowest(alpha, beta).first;
  throw ConvergenceError(fmt::format("Lanczos did not converge in {} iterations", cap));
}

}  // namespace

SparseHamiltonian::SparseHamiltonian(const WeightedPauliSum& h)
    : num_qubits_(h.num_qubits()) {
  if (num_qubits_ > kStretchQubitLimit) {
    throw GuardError(fmt::format("{} qubits exceeds the {}-qubit operator guard",
                                 num_qubits_, kStretchQubitLimit));
  }
  static constexpr cplx kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::map<std::uint64_t, FlipGroup> groups;
  std::vector<std::pair<std::uint64_t, double>> diagonal_terms;
  for (const auto& term : h.terms()) {
    const std::uint64_t x = term.string.x_mask();
    const std::uint64_t z = term.string.z_mask();
    if (x == 0) {
      diagonal_terms.emplace_back(z, term.weight);
      continue;
    }
    const int ys = std::popcount(x & z);
    if (ys % 2) real_ = false;
    FlipGroup& g = groups[x];
    g.x = x;
    g.z.push_back(z);
    g.coefficient.push_back(term.weight * kPowers[ys & 3]);
  }
  for (auto& [x, g] : groups) flips_.push_back(std::move(g));
  diagonal_.assign(dimension(), 0.0);
  for (std::size_t s = 0; s < diagonal_.size(); ++s) {
    double acc = 0;
    for (const auto& [z, w] : diagonal_terms) acc += (std::popcount(s & z) & 1) ? -w : w;
    diagonal_[s] = acc;
  }
}

template <typename T>
void SparseHamiltonian::apply_impl(std::span<const T> in, std::span<T> out) const {
  const std::size_t dim = dimension();
  if (in.size() != dim || out.size() != dim) {
    throw std::invalid_argument("vector length does not match the operator");
  }
  for (std::size_t s = 0; s < dim; ++s) out[s] = diagonal_[s] * in[s];
  for (const FlipGroup& g : flips_) {
    const std::size_t terms = g.z.size();
    std::vector<T> coef(terms);
    for (std::size_t t = 0; t < terms; ++t) {
      if constexpr (std::is_same_v<T, double>) {
        coef[t] = g.coefficient[t].real();
      } else {
        coef[t] = g.coefficient[t];
      }
    }
    for (std::size_t s = 0; s < dim; ++s) {
      T acc{};
      for (std::size_t t = 0; t < terms; ++t) {
        acc += (std::popcount(s & g.z[t]) & 1) ? -coef[t] : coef[t];
      }
      out[s ^ g.x] += acc * in[s];
    }
  }
}

void SparseHamiltonian::apply(std::span<const cplx> in, std::span<cplx> out) const {
  apply_impl(in, out);
}

void SparseHamiltonian::apply(std::span<const double> in, std::span<double> out) const {
  if (!real_) throw std::logic_error("operator has complex matrix elements");
  apply_impl(in, out);
}

Eigen::MatrixXcd SparseHamiltonian::dense() const {
  if (num_qubits_ > 12) {
    throw GuardError(fmt::format("dense matrix of {} qubits exceeds the 12-qubit guard",
                                 num_qubits_));
  }
  const auto dim = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) m(s, s) = diagonal_[s];
  for (const FlipGroup& g : flips_) {
    for (Eigen::Index s = 0; s < dim; ++s) {
      cplx acc = 0;
      for (std::size_t t = 0; t < g.z.size(); ++t) {
        acc += (std::popcount(static_cast<std::uint64_t>(s) & g.z[t]) & 1)
                   ? -g.coefficient[t]
                   : g.coefficient[t];
      }
      m(s ^ static_cast<Eigen::Index>(g.x), s) += acc;
    }
  }
  return m;
}

double exact_ground_energy(const WeightedPauliSum& h, const OracleOptions& options) {
  const std::size_t q = h.num_qubits();
  if (q == 0) throw std::invalid_argument("empty register");
  OracleMethod method = options.method;
  if (method == OracleMethod::Auto) {
    method = q <= kDenseQubitLimit ? OracleMethod::Dense : OracleMethod::Iterative;
  }
  if (method == OracleMethod::Dense) {
    if (q > kDenseQubitLimit) {
      throw GuardError(fmt::format("dense diagonalization of {} qubits exceeds the {}-qubit guard",
                                   q, kDenseQubitLimit));
    }
    const SparseHamiltonian op(h);
    const Eigen::MatrixXcd m = op.dense();
    if (op.is_real()) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.real(), Eigen::EigenvaluesOnly);
      return solver.eigenvalues()[0];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()[0];
  }
  const std::size_t limit = options.allow_stretch ? kStretchQubitLimit : kIterativeQubitLimit;
  if (q > limit) {
    throw GuardError(fmt::format(
        "iterative diagonalization of {} qubits exceeds the {}-qubit guard", q, limit));
  }
  const SparseHamiltonian op(h);
  const bool keep_basis = q <= kIterativeQubitLimit;
  return op.is_real() ? lanczos_lowest<double>(op, options, keep_basis)
                      : lanczos_lowest<cplx>(op, options, keep_basis);
}

MomentVector exact_moments(const WeightedPauliSum& h, std::span<const cplx> psi, int nmax) {
  if (nmax < 1) throw std::invalid_argument("nmax must be at least 1");
  if (h.num_qubits() > kStatevectorQubitLimit) {
    throw GuardError(fmt::format("moments of {} qubits exceed the {}-qubit guard",
                                 h.num_qubits(), kStatevectorQubitLimit));
  }
  const SparseHamiltonian op(h);
  if (psi.size() != op.dimension()) {
    throw std::invalid_argument("state length does not match the Hamiltonian");
  }
  MomentVector m;
  m.provenance = Provenance::Exact;
  std::vector<cplx> v(psi.begin(), psi.end()), w(psi.size());
  const std::vector<cplx> ref(psi.begin(), psi.end());
  for (int n = 1; n <= nmax; ++n) {
    op.apply(std::span<const cplx>(v), std::span<cplx>(w));
    std::swap(v, w);
    m.values.push_back(dot(ref, v).real());
  }
  return m;
}

MomentVector exact_moments(const WeightedPauliSum& h, const PairProductState& state,
                           int nmax) {
  if (state.num_qubits() != h.num_qubits()) {
    throw QubitCountMismatch(h.num_qubits(), state.num_qubits());
  }
  if (state.num_qubits() > kStatevectorQubitLimit) {
    throw GuardError(fmt::format("moments of {} qubits exceed the {}-qubit guard",
                                 state.num_qubits(), kStatevectorQubitLimit));
  }
  const std::vector<cplx> psi = state.to_statevector();
  return exact_moments(h, psi, nmax);
}

}  // namespace qcm
