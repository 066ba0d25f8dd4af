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

#include "qcm/io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "qcm/errors.hpp"

namespace qcm::io {

json to_json(const WeightedPauliSum& sum) {
  json terms = json::array();
  for (const auto& t : sum.terms()) {
    terms.push_back({{"string", t.string.str()}, {"weight", t.weight}});
  }
  return {{"q", sum.num_qubits()}, {"terms", std::move(terms)}};
}

WeightedPauliSum sum_from_json(const json& j) {
  const std::size_t q = j.at("q").get<std::size_t>();
  std::vector<std::pair<std::complex<double>, PauliString>> raw;
  for (const auto& t : j.at("terms")) {
    raw.emplace_back(t.at("weight").get<double>(),
                     PauliString::from_str(t.at("string").get<std::string>()));
  }
  return sum_compress(q, raw, 0.0);
}

json groups_to_json(int n, const std::vector<TPBGroup>& groups) {
  json arr = json::array();
  for (const auto& g : groups) {
    json members = json::array();
    for (const auto& m : g.members) members.push_back(m.str());
    arr.push_back({{"label", g.label.str()}, {"members", std::move(members)}});
  }
  return {{"n", n}, {"groups", std::move(arr)}};
}

std::pair<int, std::vector<TPBGroup>> groups_from_json(const json& j) {
  std::vector<TPBGroup> groups;
  for (const auto& g : j.at("groups")) {
    TPBGroup group;
    group.label = PauliString::from_str(g.at("label").get<std::string>());
    for (const auto& m : g.at("members")) {
      PauliString member = PauliString::from_str(m.get<std::string>());
      if (!qwc(member, group.label)) {
        throw IncompatibleMemberError(member.str(), group.label.str());
      }
      group.members.push_back(member);
    }
    groups.push_back(std::move(group));
  }
  return {j.at("n").get<int>(), std::move(groups)};
}

json lattice_to_json(const LatticeGraph& graph, const CouplingSet& couplings) {
  if (couplings.size() != graph.edges.size()) {
    throw std::invalid_argument("one coupling triple per edge required");
  }
  json edges = json::array();
  json cs = json::array();
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto [i, j] = graph.edges[e];
    edges.push_back({i, j});
    cs.push_back({{"edge", {i, j}},
                  {"jx", couplings[e].jx},
                  {"jy", couplings[e].jy},
                  {"jz", couplings[e].jz}});
  }
  return {{"kind", to_string(graph.kind)},
          {"dims", graph.dims},
          {"q", graph.num_qubits},
          {"edges", std::move(edges)},
          {"couplings", std::move(cs)}};
}

std::pair<LatticeGraph, CouplingSet> lattice_from_json(const json& j) {
  const std::size_t q = j.at("q").get<std::size_t>();
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    edges.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
  }
  LatticeGraph graph = graph_from_edges(q, edges);
  if (j.contains("kind")) graph.kind = parse_lattice_kind(j.at("kind").get<std::string>());
  if (j.contains("dims")) graph.dims = j.at("dims").get<std::vector<std::size_t>>();

  CouplingSet couplings(graph.edges.size(), EdgeCoupling{1.0, 1.0, 1.0});
  if (j.contains("couplings")) {
    std::vector<bool> seen(graph.edges.size(), false);
    for (const auto& c : j.at("couplings")) {
      Edge e{c.at("edge").at(0).get<std::size_t>(), c.at("edge").at(1).get<std::size_t>()};
      if (e.first > e.second) std::swap(e.first, e.second);
      const auto it = std::lower_bound(graph.edges.begin(), graph.edges.end(), e);
      if (it == graph.edges.end() || *it != e) {
        throw std::invalid_argument(
            fmt::format("coupling for unknown edge ({}, {})", e.first, e.second));
      }
      const auto k = static_cast<std::size_t>(it - graph.edges.begin());
      couplings[k] = {c.at("jx").get<double>(), c.at("jy").get<double>(),
                      c.at("jz").get<double>()};
      seen[k] = true;
    }
    for (std::size_t k = 0; k < seen.size(); ++k) {
      if (!seen[k]) throw std::invalid_argument("coupling list does not cover every edge");
    }
  }
  return {std::move(graph), std::move(couplings)};
}

json to_json(const MeasurementStore& store) {
  json j = {{"q", store.num_qubits()},
            {"seed", store.seed()},
            {"shots_per_group", store.shots_per_group()}};
  if (store.theta()) j["theta"] = *store.theta();
  if (store.damping() != 0.0) j["damping"] = store.damping();
  json groups = json::array();
  for (const auto& rec : store.records()) {
    json counts = json::object();
    for (const auto& [bits, n] : rec.counts) counts[bits] = n;
    json members = json::array();
    for (const auto& m : rec.members) members.push_back(m.str());
    groups.push_back(
        {{"label", rec.label.str()}, {"members", std::move(members)}, {"counts", std::move(counts)}});
  }
  j["groups"] = std::move(groups);
  if (store.is_exact()) {
    std::vector<std::pair<PauliString, double>> sorted(store.derived().begin(),
                                                       store.derived().end());
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    json values = json::array();
    for (const auto& [p, v] : sorted) values.push_back({{"string", p.str()}, {"value", v}});
    j["expectations"] = std::move(values);
  }
  return j;
}

MeasurementStore store_from_json(const json& j) {
  const std::uint64_t shots = j.at("shots_per_group").get<std::uint64_t>();
  std::size_t q = 0;
  if (j.contains("q")) {
    q = j.at("q").get<std::size_t>();
  } else if (!j.at("groups").empty()) {
    q = j.at("groups").at(0).at("label").get<std::string>().size();
  } else if (j.contains("expectations") && !j.at("expectations").empty()) {
    q = j.at("expectations").at(0).at("string").get<std::string>().size();
  }
  MeasurementStore store(q, j.at("seed").get<std::uint64_t>(), shots);
  if (j.contains("theta")) store.set_theta(j.at("theta").get<double>());
  for (const auto& g : j.at("groups")) {
    if (store.is_exact()) break;
    const PauliString label = PauliString::from_str(g.at("label").get<std::string>());
    std::vector<PauliString> members;
    if (g.contains("members")) {
      for (const auto& m : g.at("members")) {
        members.push_back(PauliString::from_str(m.get<std::string>()));
      }
    }
    Counts counts;
    for (const auto& [bits, n] : g.at("counts").items()) counts[bits] = n.get<std::uint64_t>();
    store.add_record(label, members, std::move(counts));
  }
  if (store.is_exact() && j.contains("expectations")) {
    for (const auto& e : j.at("expectations")) {
      store.set_expectation(PauliString::from_str(e.at("string").get<std::string>()),
                            e.at("value").get<double>());
    }
  }
  if (j.contains("damping")) {
    const double lambda = j.at("damping").get<double>();
    // Exact store files already hold damped values.
    if (lambda != 0.0 && !store.is_exact()) store = store.damped(lambda);
  }
  return store;
}

json to_json(const EstimateRecord& rec) {
  std::string fallback = "none";
  if (rec.infinum) fallback = to_string(rec.infinum->fallback);
  json j = {{"theta", rec.theta},
            {"moments", rec.moments.values},
            {"cumulants", rec.cumulants.values},
            {"variational", rec.variational.value},
            {"infinum", rec.infinum ? json(rec.infinum->value) : json(nullptr)},
            {"infinum_err", rec.infinum_err},
            {"fallback", fallback}};
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open {}", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw std::runtime_error(fmt::format("{}: {}", path, e.what()));
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write {}", tmp.string()));
    out << content;
    out.flush();
    if (!out) throw std::runtime_error(fmt::format("write to {} failed", tmp.string()));
  }
  fs::rename(tmp, target);
}

void write_json(const std::string& path, const json& j) {
  write_file_atomic(path, j.dump(1) + "\n");
}

}  // namespace qcm::io
