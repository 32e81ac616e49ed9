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

#include "netshuffle/experiments.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "netshuffle/ldp.h"
#include "netshuffle/rng.h"
#include "netshuffle/status_macros.h"
#include "netshuffle/walk.h"

namespace netshuffle {
namespace {

constexpr int kBisectionIterations = 200;

std::string Bool(bool value) { return value ? "true" : "false"; }

template <typename T>
absl::StatusOr<T> ParseNumber(absl::string_view text,
                              absl::string_view source) {
  T value;
  if (!absl::SimpleAtoi(text, &value)) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad number \"", text, "\" in graph source \"", source,
                     "\""));
  }
  return value;
}

std::vector<double> Grid(double first, double last, double step) {
  std::vector<double> grid;
  const int count = static_cast<int>(std::llround((last - first) / step));
  for (int i = 0; i <= count; ++i) grid.push_back(first + i * step);
  return grid;
}

// Log-spaced integer grid over [1, last] plus the given extra points.
std::vector<std::int64_t> StepGrid(std::int64_t last,
                                   std::vector<std::int64_t> extra) {
  std::set<std::int64_t> steps(extra.begin(), extra.end());
  constexpr int kPoints = 64;
  for (int i = 0; i < kPoints; ++i) {
    const double t =
        std::pow(static_cast<double>(last), static_cast<double>(i) /
                                                (kPoints - 1));
    steps.insert(std::max<std::int64_t>(1, std::llround(t)));
  }
  return {steps.begin(), steps.end()};
}

absl::StatusOr<std::int64_t> RequireMixingTime(const GraphAnalysis& analysis) {
  if (!analysis.spectral.mixing_time.has_value()) {
    return absl::FailedPreconditionError(absl::StrCat(
        analysis.name, " has zero spectral gap (bipartite); no mixing time"));
  }
  return *analysis.spectral.mixing_time;
}

AmplificationInputs BaseInputs(std::int64_t n, double sum_p_squared,
                               const Deltas& deltas) {
  AmplificationInputs inputs;
  inputs.node_count = n;
  inputs.sum_p_squared = sum_p_squared;
  inputs.delta = deltas.delta;
  inputs.delta1 = deltas.delta1;
  inputs.delta2 = deltas.delta2;
  return inputs;
}

void AddDeltaMetadata(CsvTable& table, const DeltaOverrides& overrides) {
  table.AddMetadata(
      "delta_defaults",
      absl::StrCat("delta=", overrides.delta ? "given" : "1/n^2",
                   " delta1=", overrides.delta1 ? "given" : "1/n^3",
                   " delta2=", overrides.delta2 ? "given" : "1/n^2"));
}

}  // namespace

absl::StatusOr<Deltas> ResolveDeltas(std::int64_t node_count,
                                     const DeltaOverrides& overrides) {
  if (node_count < 2 && !(overrides.delta && overrides.delta1 &&
                          overrides.delta2)) {
    return absl::InvalidArgumentError(
        "default deltas need n >= 2; pass delta, delta1 and delta2");
  }
  const auto n = static_cast<double>(node_count);
  Deltas deltas;
  deltas.delta = overrides.delta.value_or(1.0 / (n * n));
  deltas.delta1 = overrides.delta1.value_or(1.0 / (n * n * n));
  deltas.delta2 = overrides.delta2.value_or(1.0 / (n * n));
  for (double value : {deltas.delta, deltas.delta1, deltas.delta2}) {
    if (!(value > 0.0 && value < 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("delta-family value ", value, " outside (0, 1)"));
    }
  }
  return deltas;
}

absl::StatusOr<NamedGraph> ResolveGraphSource(
    const std::string& source, const DatasetManifest* manifest) {
  const std::vector<absl::string_view> parts = absl::StrSplit(source, ':');
  const absl::string_view kind = parts.front();
  NamedGraph named;
  named.name = source;
  if (kind == "file") {
    const std::string path = source.substr(5);
    NETSHUFFLE_ASSIGN_OR_RETURN(Graph graph,
                                LoadEdgeList(path, /*symmetrize=*/true));
    named.graph = LargestConnectedComponent(graph);
    return named;
  }
  if (kind == "regular") {
    if (parts.size() != 3 && parts.size() != 4) {
      return absl::InvalidArgumentError(
          "expected regular:N:K[:SEED]");
    }
    NETSHUFFLE_ASSIGN_OR_RETURN(const int n, ParseNumber<int>(parts[1], source));
    NETSHUFFLE_ASSIGN_OR_RETURN(const int k, ParseNumber<int>(parts[2], source));
    std::uint64_t seed = 0;
    if (parts.size() == 4) {
      NETSHUFFLE_ASSIGN_OR_RETURN(seed,
                                  ParseNumber<std::uint64_t>(parts[3], source));
    }
    NETSHUFFLE_ASSIGN_OR_RETURN(named.graph, RandomRegularGraph(n, k, seed));
    return named;
  }
  if (kind == "complete" || kind == "cycle" || kind == "star") {
    if (parts.size() != 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("expected ", kind, ":N"));
    }
    NETSHUFFLE_ASSIGN_OR_RETURN(const int n, ParseNumber<int>(parts[1], source));
    const int minimum = kind == "star" ? 1 : (kind == "cycle" ? 3 : 2);
    if (n < minimum) {
      return absl::InvalidArgumentError(
          absl::StrCat(kind, " needs N >= ", minimum));
    }
    named.graph = kind == "complete" ? CompleteGraph(n)
                  : kind == "cycle"  ? CycleGraph(n)
                                     : StarGraph(n);
    return named;
  }
  if (manifest == nullptr) {
    return absl::NotFoundError(absl::StrCat(
        "\"", source, "\" is not a generator spec and no manifest is loaded"));
  }
  NETSHUFFLE_ASSIGN_OR_RETURN(named.graph, LoadDataset(*manifest, source));
  return named;
}

absl::StatusOr<GraphAnalysis> AnalyzeGraph(const NamedGraph& graph,
                                           const SpectralOptions& options) {
  GraphAnalysis analysis;
  analysis.name = graph.name;
  analysis.summary = SummarizeGraph(graph.graph);
  NETSHUFFLE_ASSIGN_OR_RETURN(analysis.stationary,
                              StationaryDistribution(graph.graph));
  NETSHUFFLE_ASSIGN_OR_RETURN(analysis.spectral,
                              ComputeSpectralSummary(graph.graph, options));
  return analysis;
}

CsvTable GraphStatsTable(const std::vector<GraphAnalysis>& analyses) {
  CsvTable table("graph_stats",
                 {"graph", "n", "m", "gamma", "sum_pi_squared", "is_connected",
                  "is_bipartite", "alpha2", "alpha_n", "gap", "mixing_time"});
  for (const GraphAnalysis& a : analyses) {
    const auto& s = a.summary;
    const auto& sp = a.spectral;
    table
        .AddRow({a.name, absl::StrCat(s.node_count),
                 absl::StrCat(s.edge_count), FormatDouble(s.gamma),
                 FormatDouble(s.sum_pi_squared), Bool(s.is_connected),
                 Bool(s.is_bipartite), FormatDouble(sp.alpha2),
                 FormatDouble(sp.alpha_n), FormatDouble(sp.gap),
                 sp.mixing_time ? absl::StrCat(*sp.mixing_time) : ""})
        .IgnoreError();  // cell count is fixed above
  }
  return table;
}

double StationarySumPSquared(const GraphAnalysis& analysis,
                             std::int64_t steps) {
  return std::min(1.0, SumPSquaredBound(analysis.summary.sum_pi_squared,
                                        analysis.spectral.gap, steps));
}

absl::StatusOr<AmplificationInputs> InputsForGraph(
    const Graph& graph, const GraphAnalysis& analysis,
    Distribution distribution, std::int64_t steps, const Deltas& deltas) {
  const std::int64_t n = graph.node_count();
  if (distribution == Distribution::kStationary) {
    return BaseInputs(n, StationarySumPSquared(analysis, steps), deltas);
  }
  NETSHUFFLE_ASSIGN_OR_RETURN(const PositionDistribution p,
                              ExactSymmetricDistribution(graph, steps));
  AmplificationInputs inputs = BaseInputs(n, p.SumOfSquares(), deltas);
  NETSHUFFLE_ASSIGN_OR_RETURN(inputs.rho_star, RhoStar(p));
  return inputs;
}

CsvTable NewAmplifyTable() {
  return CsvTable("amplify",
                  {"source", "protocol", "scenario", "kind", "epsilon0",
                   "delta0", "n", "sum_p_squared", "rho_star", "delta",
                   "delta1", "delta2", "steps", "epsilon1", "epsilon",
                   "delta_total"});
}

absl::Status AppendAmplifyRow(CsvTable& table, const std::string& source,
                              std::optional<std::int64_t> steps,
                              const AmplificationResult& result) {
  const AmplificationInputs& in = result.inputs;
  return table.AddRow(
      {source, ToString(result.scenario.protocol),
       ToString(result.scenario.distribution),
       ToString(result.scenario.kind), FormatDouble(result.local.epsilon0),
       FormatDouble(result.local.delta0), absl::StrCat(in.node_count),
       FormatDouble(in.sum_p_squared), FormatDouble(in.rho_star),
       FormatDouble(in.delta), in.delta1 ? FormatDouble(*in.delta1) : "",
       FormatDouble(in.delta2), steps ? absl::StrCat(*steps) : "",
       result.epsilon1 ? FormatDouble(*result.epsilon1) : "",
       FormatDouble(result.epsilon), FormatDouble(result.delta)});
}

absl::StatusOr<double> Epsilon0ForCentral(Protocol protocol,
                                          Distribution distribution,
                                          const AmplificationInputs& inputs,
                                          double target) {
  if (!(target > 0.0) || !std::isfinite(target)) {
    return absl::InvalidArgumentError("target epsilon must be positive");
  }
  // Overflowing evaluations count as "above target".
  auto reaches = [&](double epsilon0) -> absl::StatusOr<bool> {
    auto result = Amplify(protocol, distribution, {epsilon0, 0.0}, inputs);
    if (result.status().code() == absl::StatusCode::kOutOfRange) return true;
    if (!result.ok()) return result.status();
    return result->epsilon >= target;
  };
  double lo = 0.0;
  double hi = 1.0;
  for (;;) {
    NETSHUFFLE_ASSIGN_OR_RETURN(const bool done, reaches(hi));
    if (done) break;
    lo = hi;
    hi *= 2.0;
    if (hi > 1e3) {
      return absl::OutOfRangeError(
          absl::StrCat("central epsilon ", target, " is not reachable"));
    }
  }
  for (int i = 0; i < kBisectionIterations && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    NETSHUFFLE_ASSIGN_OR_RETURN(const bool done, reaches(mid));
    (done ? hi : lo) = mid;
  }
  return hi;
}

absl::StatusOr<CsvTable> SimulateTable(const NamedGraph& graph,
                                       const GraphAnalysis& analysis,
                                       const SimulateSpec& spec) {
  if (spec.trials < 0 || spec.steps < 0) {
    return absl::InvalidArgumentError("trials and steps must be >= 0");
  }
  const std::int64_t n = graph.graph.node_count();
  NETSHUFFLE_ASSIGN_OR_RETURN(const Deltas deltas,
                              ResolveDeltas(n, spec.deltas));
  CsvTable table("simulate",
                 {"graph", "steps", "trial", "seed", "l2_norm", "max_load",
                  "empty_nodes", "l2_bound", "epsilon0", "delta",
                  "epsilon_allocation"});
  AddDeltaMetadata(table, spec.deltas);
  table.AddMetadata("l2_bound",
                    "tail probability delta2, stationary sum_i P_i^2 bound");
  const double bound = AllocationL2Bound(
      n, StationarySumPSquared(analysis, spec.steps), deltas.delta2);
  absl::Status failure;
  NETSHUFFLE_RETURN_IF_ERROR(ForEachTrace(
      graph.graph, spec.steps, spec.trials, spec.seed,
      [&](const WalkTrace& trace) {
        if (!failure.ok()) return;
        const ReportAllocation allocation = AllocationFromTrace(trace, n);
        auto epsilon =
            EpsilonFromAllocation(allocation, spec.epsilon0, deltas.delta);
        if (!epsilon.ok()) {
          failure = epsilon.status();
          return;
        }
        failure = table.AddRow(
            {graph.name, absl::StrCat(spec.steps), absl::StrCat(trace.trial),
             absl::StrCat(spec.seed), FormatDouble(allocation.l2_norm()),
             absl::StrCat(allocation.max_load()),
             absl::StrCat(allocation.empty_nodes()), FormatDouble(bound),
             FormatDouble(spec.epsilon0), FormatDouble(deltas.delta),
             FormatDouble(*epsilon)});
      }));
  NETSHUFFLE_RETURN_IF_ERROR(failure);
  return table;
}

absl::StatusOr<std::vector<CoverageResult>> AllocationCoverage(
    const Graph& graph, const GraphAnalysis& analysis, std::int64_t steps,
    std::int64_t trials, std::uint64_t seed,
    const std::vector<double>& deltas) {
  const std::int64_t n = graph.node_count();
  const double sum_p_squared = StationarySumPSquared(analysis, steps);
  std::vector<CoverageResult> results;
  for (double delta : deltas) {
    if (!(delta > 0.0 && delta < 1.0)) {
      return absl::InvalidArgumentError("coverage delta must lie in (0, 1)");
    }
    CoverageResult result;
    result.delta = delta;
    result.bound = AllocationL2Bound(n, sum_p_squared, delta);
    result.trials = trials;
    results.push_back(result);
  }
  NETSHUFFLE_RETURN_IF_ERROR(
      ForEachTrace(graph, steps, trials, seed, [&](const WalkTrace& trace) {
        const double norm = AllocationFromTrace(trace, n).l2_norm();
        for (CoverageResult& result : results) {
          if (norm > result.bound) ++result.violations;
        }
      }));
  return results;
}

absl::StatusOr<UtilityResult> RunUtility(const NamedGraph& graph,
                                         const GraphAnalysis& analysis,
                                         const UtilitySpec& spec) {
  if (spec.seeds < 1) return absl::InvalidArgumentError("seeds must be >= 1");
  std::int64_t steps = 0;
  if (spec.steps.has_value()) {
    steps = *spec.steps;
  } else {
    NETSHUFFLE_ASSIGN_OR_RETURN(steps, RequireMixingTime(analysis));
  }
  const std::int64_t n = graph.graph.node_count();
  NETSHUFFLE_ASSIGN_OR_RETURN(const Deltas deltas,
                              ResolveDeltas(n, spec.deltas));
  NETSHUFFLE_ASSIGN_OR_RETURN(
      const AmplificationInputs inputs,
      InputsForGraph(graph.graph, analysis, Distribution::kStationary, steps,
                     deltas));

  UtilityResult result;
  result.table = CsvTable(
      "utility", {"graph", "protocol", "target_epsilon", "epsilon0",
                  "central_epsilon", "squared_error", "dummies", "seed",
                  "steps", "dimension", "delta", "delta2"});
  AddDeltaMetadata(result.table, spec.deltas);
  result.table.AddMetadata("error",
                           "total squared L2 error of the mean estimate");
  for (Protocol protocol : {Protocol::kAll, Protocol::kSingle}) {
    for (double target : spec.central_targets) {
      UtilityPoint point;
      point.protocol = protocol;
      point.target = target;
      NETSHUFFLE_ASSIGN_OR_RETURN(
          point.epsilon0, Epsilon0ForCentral(protocol,
                                             Distribution::kStationary, inputs,
                                             target));
      NETSHUFFLE_ASSIGN_OR_RETURN(
          const AmplificationResult central,
          Amplify(protocol, Distribution::kStationary, {point.epsilon0, 0.0},
                  inputs));
      point.central_epsilon = central.epsilon;
      double sum = 0.0;
      double sum_squares = 0.0;
      for (int s = 0; s < spec.seeds; ++s) {
        // Shared across protocols so both see the same data draws.
        const std::uint64_t run_seed = MixBits(spec.seed + s);
        MeanEstimationConfig config;
        config.dimension = spec.dimension;
        config.epsilon0 = point.epsilon0;
        config.protocol = protocol;
        config.steps = steps;
        config.seed = run_seed;
        NETSHUFFLE_ASSIGN_OR_RETURN(const MeanEstimationOutcome outcome,
                                    RunMeanEstimation(graph.graph, config));
        sum += outcome.squared_error;
        sum_squares += outcome.squared_error * outcome.squared_error;
        NETSHUFFLE_RETURN_IF_ERROR(result.table.AddRow(
            {graph.name, ToString(protocol), FormatDouble(target),
             FormatDouble(point.epsilon0),
             FormatDouble(point.central_epsilon),
             FormatDouble(outcome.squared_error),
             absl::StrCat(outcome.dummies), absl::StrCat(run_seed),
             absl::StrCat(steps), absl::StrCat(spec.dimension),
             FormatDouble(deltas.delta), FormatDouble(deltas.delta2)}));
      }
      const double k = spec.seeds;
      point.mean_error = sum / k;
      const double variance =
          k > 1 ? std::max(0.0, (sum_squares - k * point.mean_error *
                                                   point.mean_error) /
                                    (k - 1))
                : 0.0;
      point.standard_error = std::sqrt(variance / k);
      result.points.push_back(point);
    }
  }
  return result;
}

absl::StatusOr<CsvTable> Figure3(const std::vector<GraphAnalysis>& analyses,
                                 const FigureOptions& options) {
  CsvTable table("fig3", {"series", "graph", "steps", "epsilon", "asymptote",
                          "gap", "mixing_time", "sum_p_squared", "epsilon0",
                          "delta", "delta2"});
  AddDeltaMetadata(table, options.deltas);
  table.AddMetadata("x", "steps");
  table.AddMetadata("y", "epsilon");
  for (const GraphAnalysis& a : analyses) {
    NETSHUFFLE_ASSIGN_OR_RETURN(const std::int64_t mixing,
                                RequireMixingTime(a));
    NETSHUFFLE_ASSIGN_OR_RETURN(
        const Deltas deltas, ResolveDeltas(a.summary.node_count, options.deltas));
    const LocalPrivacyParams local{options.epsilon0, 0.0};
    NETSHUFFLE_ASSIGN_OR_RETURN(
        const AmplificationResult limit,
        AmplifyAllStationary(local, BaseInputs(a.summary.node_count,
                                               a.summary.sum_pi_squared,
                                               deltas)));
    const std::vector<std::int64_t> steps =
        options.steps.empty() ? StepGrid(3 * mixing, {mixing, 2 * mixing})
                              : options.steps;
    for (std::int64_t t : steps) {
      const double sum_p_squared = StationarySumPSquared(a, t);
      NETSHUFFLE_ASSIGN_OR_RETURN(
          const AmplificationResult r,
          AmplifyAllStationary(
              local, BaseInputs(a.summary.node_count, sum_p_squared, deltas)));
      NETSHUFFLE_RETURN_IF_ERROR(table.AddRow(
          {a.name, a.name, absl::StrCat(t), FormatDouble(r.epsilon),
           FormatDouble(limit.epsilon), FormatDouble(a.spectral.gap),
           absl::StrCat(mixing), FormatDouble(sum_p_squared),
           FormatDouble(options.epsilon0), FormatDouble(deltas.delta),
           FormatDouble(deltas.delta2)}));
    }
  }
  return table;
}

absl::StatusOr<CsvTable> Figure4(const Figure4Spec& spec,
                                 const FigureOptions& options) {
  CsvTable table("fig4", {"series", "degree", "graph_seed", "steps",
                          "sum_p_squared", "rho_star", "epsilon", "asymptote",
                          "epsilon0", "delta", "delta2"});
  AddDeltaMetadata(table, options.deltas);
  table.AddMetadata("x", "steps");
  table.AddMetadata("y", "epsilon");
  table.AddMetadata("n", absl::StrCat(spec.node_count));
  const std::int64_t n = spec.node_count;
  NETSHUFFLE_ASSIGN_OR_RETURN(const Deltas deltas,
                              ResolveDeltas(n, options.deltas));
  const LocalPrivacyParams local{options.epsilon0, 0.0};
  NETSHUFFLE_ASSIGN_OR_RETURN(
      const AmplificationResult limit,
      AmplifyAllSymmetric(local, BaseInputs(n, 1.0 / n, deltas)));
  std::set<std::int64_t> wanted(options.steps.begin(), options.steps.end());
  for (int degree : spec.degrees) {
    for (int s = 0; s < spec.seeds; ++s) {
      const std::uint64_t graph_seed = MixBits(spec.seed + s);
      NETSHUFFLE_ASSIGN_OR_RETURN(
          const Graph graph,
          RandomRegularGraph(spec.node_count, degree, graph_seed));
      std::vector<double> p(n, 0.0);
      p[0] = 1.0;
      for (std::int64_t t = 1; t <= spec.max_steps; ++t) {
        p = WalkStep(graph, p);
        if (!wanted.empty() && !wanted.contains(t)) continue;
        PositionDistribution position{p, t};
        AmplificationInputs inputs =
            BaseInputs(n, position.SumOfSquares(), deltas);
        NETSHUFFLE_ASSIGN_OR_RETURN(inputs.rho_star, RhoStar(position));
        NETSHUFFLE_ASSIGN_OR_RETURN(const AmplificationResult r,
                                    AmplifyAllSymmetric(local, inputs));
        NETSHUFFLE_RETURN_IF_ERROR(table.AddRow(
            {absl::StrCat("k=", degree), absl::StrCat(degree),
             absl::StrCat(graph_seed), absl::StrCat(t),
             FormatDouble(inputs.sum_p_squared),
             FormatDouble(inputs.rho_star), FormatDouble(r.epsilon),
             FormatDouble(limit.epsilon), FormatDouble(options.epsilon0),
             FormatDouble(deltas.delta), FormatDouble(deltas.delta2)}));
      }
    }
  }
  return table;
}

absl::StatusOr<CsvTable> Figure5(const std::vector<GraphAnalysis>& analyses,
                                 const FigureOptions& options) {
  CsvTable table("fig5", {"series", "graph", "epsilon0", "epsilon", "steps",
                          "sum_p_squared", "delta", "delta2"});
  AddDeltaMetadata(table, options.deltas);
  table.AddMetadata("x", "epsilon0");
  table.AddMetadata("y", "epsilon");
  const std::vector<double> grid = options.epsilon0_grid.empty()
                                       ? Grid(0.1, 1.2, 0.1)
                                       : options.epsilon0_grid;
  for (const GraphAnalysis& a : analyses) {
    NETSHUFFLE_ASSIGN_OR_RETURN(const std::int64_t mixing,
                                RequireMixingTime(a));
    NETSHUFFLE_ASSIGN_OR_RETURN(
        const Deltas deltas, ResolveDeltas(a.summary.node_count, options.deltas));
    const double sum_p_squared = StationarySumPSquared(a, mixing);
    for (double epsilon0 : grid) {
      NETSHUFFLE_ASSIGN_OR_RETURN(
          const AmplificationResult r,
          AmplifyAllStationary({epsilon0, 0.0},
                               BaseInputs(a.summary.node_count, sum_p_squared,
                                          deltas)));
      NETSHUFFLE_RETURN_IF_ERROR(table.AddRow(
          {a.name, a.name, FormatDouble(epsilon0), FormatDouble(r.epsilon),
           absl::StrCat(mixing), FormatDouble(sum_p_squared),
           FormatDouble(deltas.delta), FormatDouble(deltas.delta2)}));
    }
  }
  return table;
}

absl::StatusOr<CsvTable> Figure7(const Figure7Spec& spec,
                                 const FigureOptions& options) {
  CsvTable table("fig7", {"series", "n", "gamma", "protocol", "epsilon0",
                          "epsilon", "delta", "delta2"});
  AddDeltaMetadata(table, options.deltas);
  table.AddMetadata("x", "epsilon0");
  table.AddMetadata("y", "epsilon");
  const std::vector<double> grid = options.epsilon0_grid.empty()
                                       ? Grid(0.2, 2.0, 0.1)
                                       : options.epsilon0_grid;
  for (std::int64_t n : spec.node_counts) {
    NETSHUFFLE_ASSIGN_OR_RETURN(const Deltas deltas,
                                ResolveDeltas(n, options.deltas));
    for (double gamma : spec.gammas) {
      if (!(gamma >= 1.0 && gamma <= static_cast<double>(n))) {
        return absl::InvalidArgumentError(
            absl::StrCat("gamma ", gamma, " outside [1, n]"));
      }
      for (Protocol protocol : spec.protocols) {
        const std::string series = absl::StrCat(
            "n=", n, " gamma=", FormatDouble(gamma), " ", ToString(protocol));
        for (double epsilon0 : grid) {
          NETSHUFFLE_ASSIGN_OR_RETURN(
              const AmplificationResult r,
              Amplify(protocol, Distribution::kStationary, {epsilon0, 0.0},
                      BaseInputs(n, gamma / static_cast<double>(n), deltas)));
          NETSHUFFLE_RETURN_IF_ERROR(table.AddRow(
              {series, absl::StrCat(n), FormatDouble(gamma),
               ToString(protocol), FormatDouble(epsilon0),
               FormatDouble(r.epsilon), FormatDouble(deltas.delta),
               FormatDouble(deltas.delta2)}));
        }
      }
    }
  }
  return table;
}

absl::StatusOr<CsvTable> Figure8(const NamedGraph& graph,
                                 const GraphAnalysis& analysis,
                                 const UtilitySpec& spec) {
  NETSHUFFLE_ASSIGN_OR_RETURN(UtilityResult result,
                              RunUtility(graph, analysis, spec));
  CsvTable table("fig8", result.table.columns());
  AddDeltaMetadata(table, spec.deltas);
  table.AddMetadata("x", "central_epsilon");
  table.AddMetadata("y", "squared_error");
  table.AddMetadata("series", "protocol");
  for (const auto& row : result.table.rows()) {
    NETSHUFFLE_RETURN_IF_ERROR(table.AddRow(row));
  }
  return table;
}

std::optional<std::int64_t> ConvergenceStep(
    const std::vector<std::int64_t>& steps, const std::vector<double>& values,
    double asymptote, double relative) {
  std::optional<std::int64_t> first;
  for (std::size_t i = 0; i < steps.size() && i < values.size(); ++i) {
    const bool close =
        std::abs(values[i] - asymptote) <= relative * std::abs(asymptote);
    if (!close) {
      first.reset();
    } else if (!first.has_value()) {
      first = steps[i];
    }
  }
  return first;
}

}  // namespace netshuffle
