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

#include "qcm/models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "qcm/rng.hpp"

namespace qcm {

namespace {

LatticeGraph finish(LatticeKind kind, std::vector<std::size_t> dims,
                    std::size_t q, std::vector<Edge> edges) {
  for (auto& [i, j] : edges) {
    if (i == j) throw std::invalid_argument("self-loop in edge list");
    if (i >= q || j >= q) {
      throw std::invalid_argument(
          fmt::format("edge ({}, {}) outside [0, {})", i, j, q));
    }
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw std::invalid_argument("duplicate edge in lattice");
  }
  return {kind, std::move(dims), q, std::move(edges)};
}

LatticeGraph build_chain(std::size_t q) {
  if (q < 2) throw std::invalid_argument("chain needs at least 2 qubits");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < q; ++i) edges.emplace_back(i, i + 1);
  return finish(LatticeKind::Chain, {q}, q, std::move(edges));
}

LatticeGraph build_square(std::size_t rows, std::size_t cols) {
  if (rows < 1 || cols < 1 || rows * cols < 2) {
    throw std::invalid_argument("square lattice needs rows, cols >= 1 and q >= 2");
  }
  auto index = [cols](std::size_t r, std::size_t c) {
    return r * cols + ((r % 2 == 0) ? c : cols - 1 - c);
  };
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(index(r, c), index(r, c + 1));
      if (r + 1 < rows) edges.emplace_back(index(r, c), index(r + 1, c));
    }
  }
  return finish(LatticeKind::Square, {rows, cols}, rows * cols, std::move(edges));
}

// Honeycomb as a brick wall: cell (r, c) spans x in [2c + r%2, 2c + r%2 + 2]
// and y in [r, r+1]. Every edge is then subdivided by a midpoint vertex.
// Vertices live on doubled coordinates and are numbered in (y, x) order.
LatticeGraph build_heavy_honeycomb(std::size_t rows, std::size_t cols) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("heavy-honeycomb needs rows, cols >= 1");
  }
  using Point = std::pair<std::size_t, std::size_t>;  // (2y, 2x)
  std::vector<std::pair<Point, Point>> base_edges;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t x0 = 2 * c + r % 2;
      auto p = [](std::size_t x, std::size_t y) { return Point{2 * y, 2 * x}; };
      base_edges.push_back({p(x0, r), p(x0 + 1, r)});
      base_edges.push_back({p(x0 + 1, r), p(x0 + 2, r)});
      base_edges.push_back({p(x0, r + 1), p(x0 + 1, r + 1)});
      base_edges.push_back({p(x0 + 1, r + 1), p(x0 + 2, r + 1)});
      base_edges.push_back({p(x0, r), p(x0, r + 1)});
      base_edges.push_back({p(x0 + 2, r), p(x0 + 2, r + 1)});
    }
  }
  for (auto& [u, v] : base_edges) {
    if (v < u) std::swap(u, v);
  }
  std::sort(base_edges.begin(), base_edges.end());
  base_edges.erase(std::unique(base_edges.begin(), base_edges.end()),
                   base_edges.end());

  std::map<Point, std::size_t> ids;
  std::vector<std::pair<Point, Point>> heavy_edges;
  for (const auto& [u, v] : base_edges) {
    const Point mid{(u.first + v.first) / 2, (u.second + v.second) / 2};
    ids.emplace(u, 0);
    ids.emplace(v, 0);
    ids.emplace(mid, 0);
    heavy_edges.push_back({u, mid});
    heavy_edges.push_back({mid, v});
  }
  std::size_t next = 0;
  for (auto& [pt, id] : ids) id = next++;
  std::vector<Edge> edges;
  edges.reserve(heavy_edges.size());
  for (const auto& [u, v] : heavy_edges) edges.emplace_back(ids[u], ids[v]);
  return finish(LatticeKind::HeavyHoneycomb, {rows, cols}, ids.size(),
                std::move(edges));
}

}  // namespace

std::string to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::Chain: return "chain";
    case LatticeKind::HeavyHoneycomb: return "heavy-honeycomb";
    case LatticeKind::Square: return "square";
    case LatticeKind::EdgeList: return "edges";
  }
  return "unknown";
}

LatticeKind parse_lattice_kind(std::string_view name) {
  if (name == "chain" || name == "linear") return LatticeKind::Chain;
  if (name == "heavy-honeycomb" || name == "heavy-hex") return LatticeKind::HeavyHoneycomb;
  if (name == "square") return LatticeKind::Square;
  if (name == "edges") return LatticeKind::EdgeList;
  throw std::invalid_argument(fmt::format("unknown lattice family '{}'", name));
}

LatticeGraph build_lattice(LatticeKind kind, std::span<const std::size_t> dims) {
  switch (kind) {
    case LatticeKind::Chain:
      if (dims.size() != 1) throw std::invalid_argument("chain takes dims {q}");
      return build_chain(dims[0]);
    case LatticeKind::Square:
      if (dims.size() != 2) {
        throw std::invalid_argument("square lattice takes dims {rows, cols}");
      }
      return build_square(dims[0], dims[1]);
    case LatticeKind::HeavyHoneycomb:
      if (dims.size() != 2) {
        throw std::invalid_argument("heavy-honeycomb takes dims {rows, cols}");
      }
      return build_heavy_honeycomb(dims[0], dims[1]);
    case LatticeKind::EdgeList:
      throw std::invalid_argument("edge-list graphs are built with graph_from_edges");
  }
  throw std::invalid_argument("unknown lattice kind");
}

LatticeGraph graph_from_edges(std::size_t num_qubits, std::vector<Edge> edges) {
  if (num_qubits < 1) throw std::invalid_argument("graph needs at least one qubit");
  return finish(LatticeKind::EdgeList, {num_qubits}, num_qubits, std::move(edges));
}

LatticeGraph lattice_for_qubits(LatticeKind kind, std::size_t num_qubits) {
  switch (kind) {
    case LatticeKind::Chain:
      return build_chain(num_qubits);
    case LatticeKind::Square: {
      for (std::size_t rows = static_cast<std::size_t>(std::sqrt(double(num_qubits)));
           rows >= 2; --rows) {
        if (num_qubits % rows == 0) return build_square(rows, num_qubits / rows);
      }
      break;
    }
    case LatticeKind::HeavyHoneycomb: {
      std::optional<std::pair<std::size_t, std::size_t>> best;
      for (std::size_t rows = 1; build_heavy_honeycomb(rows, 1).num_qubits <= num_qubits;
           ++rows) {
        for (std::size_t cols = rows;; ++cols) {
          const std::size_t q = build_heavy_honeycomb(rows, cols).num_qubits;
          if (q > num_qubits) break;
          if (q == num_qubits && (!best || cols - rows < best->second - best->first)) {
            best = {rows, cols};
          }
        }
      }
      if (best) return build_heavy_honeycomb(best->first, best->second);
      break;
    }
    case LatticeKind::EdgeList:
      break;
  }
  throw std::invalid_argument(fmt::format("no {} lattice has exactly {} qubits",
                                          to_string(kind), num_qubits));
}

CouplingSet uniform_couplings(const LatticeGraph& graph, double j) {
  return CouplingSet(graph.edges.size(), EdgeCoupling{j, j, j});
}

CouplingSet sample_couplings(const LatticeGraph& graph, std::uint64_t seed) {
  const rng::Stream stream(rng::derive(seed, "couplings"));
  auto draw = [&](std::uint64_t counter) {
    const auto milli = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(stream.bits_at(counter)) * 1000) >> 64);
    return static_cast<double>(milli) / 1000.0;
  };
  CouplingSet out;
  out.reserve(graph.edges.size());
  for (std::uint64_t e = 0; e < graph.edges.size(); ++e) {
    out.push_back({draw(3 * e), draw(3 * e + 1), draw(3 * e + 2)});
  }
  return out;
}

std::string coupling_digest(const CouplingSet& couplings) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto feed = [&h](double v) {
    const auto milli = static_cast<std::uint64_t>(std::llround(v * 1000.0));
    for (int b = 0; b < 8; ++b) {
      h ^= (milli >> (8 * b)) & 0xFF;
      h *= 0x100000001B3ULL;
    }
  };
  for (const auto& c : couplings) {
    feed(c.jx);
    feed(c.jy);
    feed(c.jz);
  }
  return fmt::format("{:016x}", h);
}

WeightedPauliSum build_hamiltonian(const LatticeGraph& graph,
                                   const CouplingSet& couplings) {
  if (couplings.size() != graph.edges.size()) {
    throw std::invalid_argument(fmt::format(
        "{} coupling triples for {} edges", couplings.size(), graph.edges.size()));
  }
  const std::size_t q = graph.num_qubits;
  const double density = 1.0 / static_cast<double>(q);
  std::vector<std::pair<std::complex<double>, PauliString>> raw;
  raw.reserve(3 * graph.edges.size());
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto [i, j] = graph.edges[e];
    const EdgeCoupling& c = couplings[e];
    raw.emplace_back(c.jx * density, PauliString::pair(q, i, j, Pauli::X));
    raw.emplace_back(c.jy * density, PauliString::pair(q, i, j, Pauli::Y));
    raw.emplace_back(c.jz * density, PauliString::pair(q, i, j, Pauli::Z));
  }
  return sum_compress(q, raw, 0.0);
}

TrialStateSpec chain_trial_spec(std::size_t num_qubits, double theta) {
  TrialStateSpec spec;
  spec.num_qubits = num_qubits;
  spec.theta = theta;
  for (std::size_t a = 0; a + 1 < num_qubits; a += 2) spec.pairs.emplace_back(a, a + 1);
  if (num_qubits % 2 == 1) spec.unpaired = num_qubits - 1;
  return spec;
}

PairProductState trial_state(const TrialStateSpec& spec) {
  constexpr double kThetaSlack = 1e-12;
  if (!(spec.theta >= -kThetaSlack && spec.theta <= 2 * std::numbers::pi + kThetaSlack)) {
    throw std::invalid_argument(
        fmt::format("theta {} outside [0, 2pi]", spec.theta));
  }
  const double c = std::cos(spec.theta / 2);
  const double s = std::sin(spec.theta / 2);

  std::vector<PairProductState::Block> blocks;
  for (const auto& [a, b] : spec.pairs) {
    // Index bit 0 = qubit a, bit 1 = qubit b. Start in |00>.
    std::array<cplx, 4> v{1, 0, 0, 0};
    // RY(theta) on b.
    for (unsigned lo : {0u, 1u}) {
      const cplx v0 = v[lo];
      const cplx v1 = v[lo | 2];
      v[lo] = c * v0 - s * v1;
      v[lo | 2] = s * v0 + c * v1;
    }
    // CNOT with control b, target a.
    std::swap(v[2], v[3]);
    // X on a.
    std::swap(v[0], v[1]);
    std::swap(v[2], v[3]);
    blocks.push_back({{a, b}, v});
  }
  if (spec.unpaired) blocks.push_back({{*spec.unpaired}, {1, 0, 0, 0}});
  return PairProductState(spec.num_qubits, std::move(blocks));
}

}  // namespace qcm
