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

#include <cmath>
#include <cstdint>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qcm/engine.hpp"
#include "qcm/ensemble.hpp"
#include "qcm/errors.hpp"
#include "qcm/estimator.hpp"
#include "qcm/grouping.hpp"
#include "qcm/io.hpp"
#include "qcm/models.hpp"
#include "qcm/oracle.hpp"
#include "qcm/pipeline.hpp"
#include "qcm/rng.hpp"

namespace {

using namespace qcm;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) { return fmt::format("{:.17g}", v); }

struct LatticeArgs {
  std::string kind;
  std::size_t q = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string file;
  std::string hamiltonian;
  std::string couplings = "uniform";
  std::uint64_t coupling_seed = 0;
  double j = 1.0;
};

void add_lattice_options(CLI::App* app, LatticeArgs& args) {
  app->add_option("--lattice", args.kind, "chain | square | heavy-honeycomb");
  app->add_option("--q", args.q, "qubit count (chain; other families pick dims)");
  app->add_option("--rows", args.rows, "rows (square) or cell rows (heavy-honeycomb)");
  app->add_option("--cols", args.cols, "columns (square) or cell columns (heavy-honeycomb)");
  app->add_option("--lattice-file", args.file, "lattice/coupling JSON");
  app->add_option("--couplings", args.couplings, "uniform | random")
      ->check(CLI::IsMember({"uniform", "random"}));
  app->add_option("--coupling-seed", args.coupling_seed, "seed for random couplings");
  app->add_option("--j", args.j, "uniform coupling value");
}

std::pair<LatticeGraph, CouplingSet> resolve_lattice(const LatticeArgs& args) {
  if (!args.file.empty()) return io::lattice_from_json(io::read_json(args.file));
  if (args.kind.empty()) throw UsageError("give --lattice with dimensions or --lattice-file");
  const LatticeKind kind = parse_lattice_kind(args.kind);
  LatticeGraph graph;
  if (args.rows != 0 || args.cols != 0) {
    if (kind == LatticeKind::Chain || args.rows == 0 || args.cols == 0) {
      throw UsageError(fmt::format("{} needs {}", args.kind,
                                   kind == LatticeKind::Chain ? "--q" : "--rows and --cols"));
    }
    const std::size_t dims[2] = {args.rows, args.cols};
    graph = build_lattice(kind, dims);
  } else if (args.q != 0) {
    graph = lattice_for_qubits(kind, args.q);
  } else {
    throw UsageError(fmt::format("missing dimensions for lattice '{}'", args.kind));
  }
  CouplingSet couplings = args.couplings == "random"
                              ? sample_couplings(graph, args.coupling_seed)
                              : uniform_couplings(graph, args.j);
  return {std::move(graph), std::move(couplings)};
}

WeightedPauliSum resolve_hamiltonian(const LatticeArgs& args, std::optional<LatticeGraph>* graph) {
  if (!args.hamiltonian.empty()) {
    if (!args.kind.empty() || !args.file.empty()) {
      throw UsageError("--hamiltonian excludes lattice options");
    }
    return io::sum_from_json(io::read_json(args.hamiltonian));
  }
  auto [g, couplings] = resolve_lattice(args);
  WeightedPauliSum h = build_hamiltonian(g, couplings);
  if (graph) *graph = std::move(g);
  return h;
}

// "start:stop:count" in units of pi, or a single value.
std::vector<double> parse_theta_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  try {
    if (parts.size() == 1) return {std::stod(parts[0]) * std::numbers::pi};
    if (parts.size() == 3) {
      const double start = std::stod(parts[0]);
      const double stop = std::stod(parts[1]);
      const long count = std::stol(parts[2]);
      if (count < 1) throw UsageError("theta grid count must be positive");
      std::vector<double> grid;
      for (long k = 0; k < count; ++k) {
        const double t = count == 1 ? start : start + (stop - start) * k / (count - 1);
        grid.push_back(t * std::numbers::pi);
      }
      return grid;
    }
  } catch (const std::logic_error&) {
  }
  throw UsageError(fmt::format("bad theta grid '{}', expected start:stop:count", spec));
}

std::vector<std::size_t> parse_list(const std::string& spec) {
  std::vector<std::size_t> out;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      out.push_back(std::stoul(item));
    } catch (const std::logic_error&) {
      throw UsageError(fmt::format("bad integer list '{}'", spec));
    }
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

// expand ---------------------------------------------------------------

struct ExpandArgs {
  LatticeArgs lattice;
  int nmax = 4;
  std::string out = "qcm_expand";
};

int run_expand(const ExpandArgs& args) {
  std::optional<LatticeGraph> graph;
  const WeightedPauliSum h = resolve_hamiltonian(args.lattice, &graph);
  const MomentPlan plan = make_plan(h, args.nmax);
  if (graph) {
    auto [g, couplings] = resolve_lattice(args.lattice);
    io::write_json(args.out + "/lattice.json", io::lattice_to_json(g, couplings));
  }
  fmt::print("{:>3} {:>12} {:>10}\n", "n", "strings", "groups");
  for (int n = 1; n <= args.nmax; ++n) {
    io::write_json(fmt::format("{}/power_{}.json", args.out, n), io::to_json(plan.powers[n - 1]));
    io::write_json(fmt::format("{}/groups_{}.json", args.out, n),
                   io::groups_to_json(n, plan.groups[n - 1]));
    fmt::print("{:>3} {:>12} {:>10}\n", n, plan.powers[n - 1].size(), plan.groups[n - 1].size());
  }
  return 0;
}

// sweep ----------------------------------------------------------------

struct SweepArgs {
  LatticeArgs lattice;
  std::string from;
  int nmax = 4;
  std::string theta = "0.7:1.3:13";
  std::string backend = "exact";
  std::uint64_t shots = 5 * 1024;
  std::uint64_t seed = 0;
  double lambda = 0.0;
  std::size_t bootstrap = kDefaultBootstrapResamples;
  std::string out = "sweep.csv";
  std::string store_dir;
};

MomentPlan load_plan(const std::string& dir, int nmax) {
  MomentPlan plan;
  for (int n = 1; n <= nmax; ++n) {
    plan.powers.push_back(io::sum_from_json(io::read_json(fmt::format("{}/power_{}.json", dir, n))));
    auto [order, groups] = io::groups_from_json(io::read_json(fmt::format("{}/groups_{}.json", dir, n)));
    if (order != n) throw std::runtime_error(fmt::format("groups_{}.json holds order {}", n, order));
    plan.groups.push_back(std::move(groups));
  }
  plan.hamiltonian = plan.powers.front();
  return plan;
}

int run_sweep(const SweepArgs& args) {
  const MomentPlan plan = args.from.empty()
                              ? make_plan(resolve_hamiltonian(args.lattice, nullptr), args.nmax)
                              : load_plan(args.from, args.nmax);
  const std::size_t q = plan.hamiltonian.num_qubits();
  const bool shots = args.backend == "shots";
  std::string csv = "theta,theta_over_pi";
  for (int n = 1; n <= args.nmax; ++n) csv += fmt::format(",m{}", n);
  for (int n = 1; n <= args.nmax; ++n) csv += fmt::format(",c{}", n);
  csv += ",variational,variational_err,infinum,infinum_err,fallback\n";

  const std::vector<double> grid = parse_theta_grid(args.theta);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double theta = grid[k];
    const PairProductState state = trial_state(chain_trial_spec(q, theta));
    const std::uint64_t theta_seed = rng::derive(args.seed, std::uint64_t{k});
    MeasurementStore store = shots ? measure_shots(state, plan.groups, args.shots, theta_seed)
                                   : measure_exact(state, plan.groups);
    store.set_theta(theta);
    if (args.lambda > 0) store = store.damped(args.lambda);
    if (!args.store_dir.empty()) {
      io::write_json(fmt::format("{}/store_{}.json", args.store_dir, k), io::to_json(store));
    }
    const EstimateRecord rec =
        estimate_from_store(plan, store, theta, shots ? args.bootstrap : 0, theta_seed);
    csv += fmt::format("{},{}", num(theta), num(theta / std::numbers::pi));
    for (double m : rec.moments.values) csv += "," + num(m);
    for (double c : rec.cumulants.values) csv += "," + num(c);
    csv += fmt::format(",{},{},{},{},{}\n", num(rec.variational.value), num(rec.variational_err),
                       rec.infinum ? num(rec.infinum->value) : "",
                       num(rec.infinum_err),
                       rec.infinum ? to_string(rec.infinum->fallback) : "undefined");
  }
  io::write_file_atomic(args.out, csv);
  fmt::print("wrote {} rows to {}\n", grid.size(), args.out);
  return 0;
}

// ensemble -------------------------------------------------------------

struct EnsembleArgs {
  LatticeArgs lattice;
  double theta = 1.0;  // units of pi
  std::size_t instances = 1000;
  std::uint64_t seed = 0;
  std::uint64_t shots = 0;
  std::string store;
  std::string store_out;
  bool no_exact = false;
  std::string out = "ensemble.csv";
  std::string hist = "ensemble_hist.json";
};

io::json histogram_json(const Histogram& h) {
  return {{"counts", h.counts}, {"underflow", h.underflow}, {"overflow", h.overflow}};
}

int run_ensemble_cmd(EnsembleArgs args) {
  if (args.lattice.kind.empty() && args.lattice.file.empty()) args.lattice.kind = "square";
  auto [graph, unused] = resolve_lattice(args.lattice);
  const double theta = args.theta * std::numbers::pi;
  const MeasurementStore store =
      args.store.empty()
          ? build_recycling_store(graph, theta, {4, args.shots, args.seed})
          : io::store_from_json(io::read_json(args.store));
  if (!args.store_out.empty()) io::write_json(args.store_out, io::to_json(store));

  EnsembleOptions options;
  options.attach_exact = !args.no_exact;
  const EnsembleResult result =
      run_ensemble(graph, theta, args.instances, args.seed, store, options);

  std::string csv = "seed,jdigest,variational,infinum,exact\n";
  std::vector<double> var, inf, exact;
  for (const auto& r : result.instances) {
    csv += fmt::format("{},{},{},{},{}\n", r.seed, r.digest, num(r.variational),
                       r.infinum ? num(*r.infinum) : "", r.exact ? num(*r.exact) : "");
    var.push_back(r.variational);
    if (r.infinum) inf.push_back(*r.infinum);
    if (r.exact) exact.push_back(*r.exact);
  }
  io::write_file_atomic(args.out, csv);

  auto hist = [](const std::vector<double>& v) {
    return histogram_json(make_histogram(v, kHistogramLow, kHistogramHigh, kHistogramBins));
  };
  const EnsembleSummary& s = result.summary;
  io::json summary = {{"instances", result.instances.size()},
                      {"mean_variational", s.mean_variational},
                      {"mean_infinum", s.mean_infinum},
                      {"undefined_infinum", s.undefined_infinum}};
  if (s.mean_exact) summary["mean_exact"] = *s.mean_exact;
  if (s.mean_abs_variational_error) {
    summary["mean_abs_variational_error"] = *s.mean_abs_variational_error;
    summary["mean_abs_infinum_error"] = *s.mean_abs_infinum_error;
  }
  io::json out = {{"edges", make_histogram({}, kHistogramLow, kHistogramHigh, kHistogramBins).edges},
                  {"variational", hist(var)},
                  {"infinum", hist(inf)},
                  {"summary", summary}};
  if (!exact.empty()) out["exact"] = hist(exact);
  io::write_json(args.hist, out);

  fmt::print("instances {}  mean variational {:.6f}  mean infinum {:.6f}\n",
             result.instances.size(), s.mean_variational, s.mean_infinum);
  if (s.mean_abs_variational_error) {
    fmt::print("mean |variational - exact| {:.6f}  mean |infinum - exact| {:.6f}\n",
               *s.mean_abs_variational_error, *s.mean_abs_infinum_error);
  }
  return 0;
}

// scaling --------------------------------------------------------------

struct ScalingArgs {
  std::string family = "square";
  std::string q = "16,25,36";
  int n = 4;
  std::string out = "scaling.csv";
};

int run_scaling(const ScalingArgs& args) {
  const std::vector<std::size_t> qs = parse_list(args.q);
  const std::vector<ScalingRow> rows = scaling_report(parse_lattice_kind(args.family), qs, args.n);
  std::string csv = "q,raw,groups\n";
  fmt::print("{:>4} {:>12} {:>8} {:>10}\n", "q", "raw", "groups", "groups/q");
  for (const auto& r : rows) {
    csv += fmt::format("{},{},{}\n", r.num_qubits, r.raw, r.groups);
    fmt::print("{:>4} {:>12} {:>8} {:>10.2f}\n", r.num_qubits, r.raw, r.groups,
               static_cast<double>(r.groups) / r.num_qubits);
  }
  io::write_file_atomic(args.out, csv);
  return 0;
}

// oracle ---------------------------------------------------------------

struct OracleArgs {
  LatticeArgs lattice;
  std::string method = "auto";
  bool stretch = false;
};

int run_oracle(const OracleArgs& args) {
  const WeightedPauliSum h = resolve_hamiltonian(args.lattice, nullptr);
  OracleOptions options;
  options.allow_stretch = args.stretch;
  if (args.method == "dense") options.method = OracleMethod::Dense;
  if (args.method == "iterative") options.method = OracleMethod::Iterative;
  fmt::print("{:.12g}\n", exact_ground_energy(h, options));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum computed moments pipeline"};
  app.require_subcommand(1);

  ExpandArgs expand;
  auto* cmd_expand = app.add_subcommand("expand", "expand H^n and group each order");
  add_lattice_options(cmd_expand, expand.lattice);
  cmd_expand->add_option("--hamiltonian", expand.lattice.hamiltonian, "Hamiltonian JSON");
  cmd_expand->add_option("--nmax", expand.nmax, "highest power")->check(CLI::Range(1, 8));
  cmd_expand->add_option("--out", expand.out, "output directory");

  SweepArgs sweep;
  auto* cmd_sweep = app.add_subcommand("sweep", "estimate over a theta grid");
  add_lattice_options(cmd_sweep, sweep.lattice);
  cmd_sweep->add_option("--hamiltonian", sweep.lattice.hamiltonian, "Hamiltonian JSON");
  cmd_sweep->add_option("--from", sweep.from, "directory written by expand");
  cmd_sweep->add_option("--nmax", sweep.nmax, "highest moment")->check(CLI::Range(4, 8));
  cmd_sweep->add_option("--theta", sweep.theta, "start:stop:count in units of pi");
  cmd_sweep->add_option("--backend", sweep.backend, "exact | shots")
      ->check(CLI::IsMember({"exact", "shots"}));
  cmd_sweep->add_option("--shots", sweep.shots, "shots per group")->check(CLI::PositiveNumber);
  cmd_sweep->add_option("--seed", sweep.seed, "master seed");
  cmd_sweep->add_option("--lambda", sweep.lambda, "damping noise strength")
      ->check(CLI::Range(0.0, 0.999999));
  cmd_sweep->add_option("--bootstrap", sweep.bootstrap, "bootstrap resamples");
  cmd_sweep->add_option("--out", sweep.out, "CSV output");
  cmd_sweep->add_option("--store-dir", sweep.store_dir, "write one store JSON per theta");

  EnsembleArgs ens;
  auto* cmd_ens = app.add_subcommand("ensemble", "random-coupling ensemble by recycling");
  add_lattice_options(cmd_ens, ens.lattice);
  cmd_ens->add_option("--theta", ens.theta, "trial angle in units of pi");
  cmd_ens->add_option("--instances", ens.instances, "coupling instances");
  cmd_ens->add_option("--seed", ens.seed, "master seed");
  cmd_ens->add_option("--shots", ens.shots, "shots per group for the store (0 = exact)");
  cmd_ens->add_option("--store", ens.store, "reuse a store JSON");
  cmd_ens->add_option("--store-out", ens.store_out, "write the store JSON");
  cmd_ens->add_flag("--no-exact", ens.no_exact, "skip exact diagonalization");
  cmd_ens->add_option("--out", ens.out, "CSV output");
  cmd_ens->add_option("--hist", ens.hist, "histogram JSON output");

  ScalingArgs scaling;
  auto* cmd_scaling = app.add_subcommand("scaling", "string and group counts of H^n");
  cmd_scaling->add_option("--family", scaling.family, "chain | square | heavy-honeycomb");
  cmd_scaling->add_option("--q", scaling.q, "comma-separated qubit counts");
  cmd_scaling->add_option("--n", scaling.n, "power")->check(CLI::Range(1, 8));
  cmd_scaling->add_option("--out", scaling.out, "CSV output");

  OracleArgs oracle;
  auto* cmd_oracle = app.add_subcommand("oracle", "exact ground energy");
  add_lattice_options(cmd_oracle, oracle.lattice);
  cmd_oracle->add_option("--hamiltonian", oracle.lattice.hamiltonian, "Hamiltonian JSON");
  cmd_oracle->add_option("--method", oracle.method, "auto | dense | iterative")
      ->check(CLI::IsMember({"auto", "dense", "iterative"}));
  cmd_oracle->add_flag("--stretch", oracle.stretch, "allow the 25-qubit iterative path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cmd_expand) return run_expand(expand);
    if (*cmd_sweep) return run_sweep(sweep);
    if (*cmd_ens) return run_ensemble_cmd(ens);
    if (*cmd_scaling) return run_scaling(scaling);
    if (*cmd_oracle) return run_oracle(oracle);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
