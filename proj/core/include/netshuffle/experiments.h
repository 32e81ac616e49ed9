// Copyright 2026 The Netshuffle Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment drivers shared by the command-line tool and the acceptance
// suite. Each driver returns a CsvTable whose schema the plotting scripts
// consume unchanged.

#ifndef NETSHUFFLE_EXPERIMENTS_H_
#define NETSHUFFLE_EXPERIMENTS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "netshuffle/accountant.h"
#include "netshuffle/csv.h"
#include "netshuffle/graph.h"
#include "netshuffle/spectral.h"

namespace netshuffle {

// Unset members default to delta = delta2 = 1/n^2 and delta1 = 1/n^3.
struct DeltaOverrides {
  std::optional<double> delta;
  std::optional<double> delta1;
  std::optional<double> delta2;
};

struct Deltas {
  double delta = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
};

absl::StatusOr<Deltas> ResolveDeltas(std::int64_t node_count,
                                     const DeltaOverrides& overrides);

struct NamedGraph {
  std::string name;
  Graph graph;
};

// Accepts "regular:N:K[:SEED]", "complete:N", "cycle:N", "star:LEAVES",
// "file:PATH" (symmetrized, largest component) or a manifest dataset name.
absl::StatusOr<NamedGraph> ResolveGraphSource(
    const std::string& source, const DatasetManifest* manifest);

struct GraphAnalysis {
  std::string name;
  GraphSummary summary;
  SpectralSummary spectral;
  PositionDistribution stationary;
};

absl::StatusOr<GraphAnalysis> AnalyzeGraph(
    const NamedGraph& graph, const SpectralOptions& options = {});

// Columns: graph, n, m, gamma, sum_pi_squared, is_connected, is_bipartite,
// alpha2, alpha_n, gap, mixing_time.
CsvTable GraphStatsTable(const std::vector<GraphAnalysis>& analyses);

// Spectral worst-case bound on sum_i P_i^2 at `steps`, capped at 1.
double StationarySumPSquared(const GraphAnalysis& analysis,
                             std::int64_t steps);

// Accountant inputs for a graph after `steps` rounds: the stationary
// scenario uses the spectral bound, the symmetric one the exact walk
// distribution from node 0 (regular graphs only).
absl::StatusOr<AmplificationInputs> InputsForGraph(
    const Graph& graph, const GraphAnalysis& analysis,
    Distribution distribution, std::int64_t steps, const Deltas& deltas);

// Columns echo every input: source, protocol, scenario, kind, epsilon0,
// delta0, n, sum_p_squared, rho_star, delta, delta1, delta2, steps,
// epsilon1, epsilon, delta_total.
CsvTable NewAmplifyTable();
absl::Status AppendAmplifyRow(CsvTable& table, const std::string& source,
                              std::optional<std::int64_t> steps,
                              const AmplificationResult& result);

// Smallest epsilon0 whose central epsilon reaches `target` (bisection).
absl::StatusOr<double> Epsilon0ForCentral(Protocol protocol,
                                          Distribution distribution,
                                          const AmplificationInputs& inputs,
                                          double target);

struct SimulateSpec {
  std::int64_t steps = 1;
  std::int64_t trials = 1;
  std::uint64_t seed = 0;
  double epsilon0 = 1.0;
  DeltaOverrides deltas;
};

// One row per trial: graph, steps, trial, seed, l2_norm, max_load,
// empty_nodes, l2_bound, epsilon_allocation. Zero trials give a header-only
// table.
absl::StatusOr<CsvTable> SimulateTable(const NamedGraph& graph,
                                       const GraphAnalysis& analysis,
                                       const SimulateSpec& spec);

struct CoverageResult {
  double delta = 0.0;
  double bound = 0.0;
  std::int64_t violations = 0;
  std::int64_t trials = 0;
  double rate() const {
    return trials == 0 ? 0.0 : static_cast<double>(violations) / trials;
  }
};

// Fraction of simulated allocations whose L2 norm exceeds the closed-form
// bound evaluated with the stationary sum_i P_i^2 bound at `steps`.
absl::StatusOr<std::vector<CoverageResult>> AllocationCoverage(
    const Graph& graph, const GraphAnalysis& analysis, std::int64_t steps,
    std::int64_t trials, std::uint64_t seed,
    const std::vector<double>& deltas);

struct UtilitySpec {
  int dimension = 200;
  // Central epsilon values at which both protocols are compared.
  std::vector<double> central_targets = {0.5, 1.0, 2.0, 4.0};
  int seeds = 20;
  std::uint64_t seed = 0;
  // Rounds; the graph's mixing time when unset.
  std::optional<std::int64_t> steps;
  DeltaOverrides deltas;
};

struct UtilityPoint {
  Protocol protocol = Protocol::kAll;
  double target = 0.0;
  double epsilon0 = 0.0;
  double central_epsilon = 0.0;
  double mean_error = 0.0;
  double standard_error = 0.0;
};

struct UtilityResult {
  // Per-seed rows: graph, protocol, target_epsilon, epsilon0,
  // central_epsilon, squared_error, dummies, seed, steps, dimension.
  CsvTable table{"utility", {}};
  std::vector<UtilityPoint> points;
};

absl::StatusOr<UtilityResult> RunUtility(const NamedGraph& graph,
                                         const GraphAnalysis& analysis,
                                         const UtilitySpec& spec);

struct FigureOptions {
  double epsilon0 = 1.0;
  std::vector<double> epsilon0_grid;
  // Explicit rounds; a default grid per figure when empty.
  std::vector<std::int64_t> steps;
  DeltaOverrides deltas;
};

// Central epsilon of the "all" protocol vs rounds, stationary bound.
// Columns: series, graph, steps, epsilon, asymptote, gap, mixing_time,
// sum_p_squared.
absl::StatusOr<CsvTable> Figure3(const std::vector<GraphAnalysis>& analyses,
                                 const FigureOptions& options);

struct Figure4Spec {
  NodeId node_count = 4096;
  std::vector<int> degrees = {4, 8, 16};
  int seeds = 5;
  std::uint64_t seed = 0;
  std::int64_t max_steps = 200;
};

// Exact symmetric-scenario epsilon vs rounds on random regular graphs.
// Columns: series, degree, graph_seed, steps, sum_p_squared, rho_star,
// epsilon, asymptote.
absl::StatusOr<CsvTable> Figure4(const Figure4Spec& spec,
                                 const FigureOptions& options);

// Central epsilon vs epsilon0 at the mixing time, "all" protocol.
// Columns: series, graph, epsilon0, epsilon, steps, sum_p_squared.
absl::StatusOr<CsvTable> Figure5(const std::vector<GraphAnalysis>& analyses,
                                 const FigureOptions& options);

struct Figure7Spec {
  std::vector<std::int64_t> node_counts = {10000, 100000, 1000000};
  std::vector<double> gammas = {1.0, 10.0};
  std::vector<Protocol> protocols = {Protocol::kAll, Protocol::kSingle};
};

// Stationary-limit epsilon vs epsilon0 for synthetic (n, gamma, protocol).
// Columns: series, n, gamma, protocol, epsilon0, epsilon.
absl::StatusOr<CsvTable> Figure7(const Figure7Spec& spec,
                                 const FigureOptions& options);

// Squared error vs central epsilon for both protocols.
absl::StatusOr<CsvTable> Figure8(const NamedGraph& graph,
                                 const GraphAnalysis& analysis,
                                 const UtilitySpec& spec);

// Steps at which `values` (indexed like `steps`) first enter and stay
// within `relative` of `asymptote`; nullopt if never.
std::optional<std::int64_t> ConvergenceStep(
    const std::vector<std::int64_t>& steps, const std::vector<double>& values,
    double asymptote, double relative);

}  // namespace netshuffle

#endif  // NETSHUFFLE_EXPERIMENTS_H_
