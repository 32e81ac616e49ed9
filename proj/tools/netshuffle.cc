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

// Command-line front end: graph statistics, amplification bounds, walk
// simulation, the utility experiment and figure data, all as CSV.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "netshuffle/accountant.h"
#include "netshuffle/csv.h"
#include "netshuffle/experiments.h"
#include "netshuffle/graph.h"
#include "netshuffle/status_macros.h"
#include "netshuffle/version.h"

namespace netshuffle {
namespace {

struct CommonFlags {
  std::string manifest;
  std::string out = "-";
  std::uint64_t seed = 0;
  std::vector<std::string> datasets;
  std::optional<double> delta;
  std::optional<double> delta1;
  std::optional<double> delta2;

  DeltaOverrides overrides() const { return {delta, delta1, delta2}; }
};

std::string DefaultManifest() {
  if (const char* env = std::getenv("NETSHUFFLE_MANIFEST")) return env;
  return "data/manifest.txt";
}

void AddCommon(CLI::App* app, CommonFlags& flags, bool datasets) {
  app->add_option("--manifest", flags.manifest,
                  "Dataset manifest (\"name path\" per line); defaults to "
                  "$NETSHUFFLE_MANIFEST or data/manifest.txt");
  app->add_option("--out", flags.out, "Output CSV path, '-' for stdout");
  app->add_option("--seed", flags.seed, "Random seed");
  app->add_option("--delta", flags.delta, "Central delta (default 1/n^2)");
  app->add_option("--delta1", flags.delta1,
                  "Approximate-LDP slack delta1 (default 1/n^3)");
  app->add_option("--delta2", flags.delta2,
                  "Allocation tail probability delta2 (default 1/n^2)");
  if (datasets) {
    app->add_option("--dataset", flags.datasets,
                    "Manifest dataset name or generator spec "
                    "(regular:N:K[:SEED], complete:N, cycle:N, star:L, "
                    "file:PATH)")
        ->delimiter(',');
  }
}

absl::StatusOr<std::vector<NamedGraph>> LoadGraphs(
    const CommonFlags& flags, const std::vector<std::string>& fallback) {
  const std::vector<std::string>& names =
      flags.datasets.empty() ? fallback : flags.datasets;
  if (names.empty()) return absl::InvalidArgumentError("--dataset is required");
  std::optional<DatasetManifest> manifest;
  const std::string manifest_path =
      flags.manifest.empty() ? DefaultManifest() : flags.manifest;
  std::vector<NamedGraph> graphs;
  for (const std::string& name : names) {
    const bool generated = name.find(':') != std::string::npos;
    if (!generated && !manifest.has_value()) {
      NETSHUFFLE_ASSIGN_OR_RETURN(manifest,
                                  DatasetManifest::Load(manifest_path));
    }
    NETSHUFFLE_ASSIGN_OR_RETURN(
        NamedGraph graph,
        ResolveGraphSource(name, manifest ? &*manifest : nullptr));
    graphs.push_back(std::move(graph));
  }
  return graphs;
}

absl::StatusOr<std::vector<GraphAnalysis>> Analyze(
    const std::vector<NamedGraph>& graphs) {
  std::vector<GraphAnalysis> analyses;
  for (const NamedGraph& graph : graphs) {
    NETSHUFFLE_ASSIGN_OR_RETURN(GraphAnalysis analysis, AnalyzeGraph(graph));
    analyses.push_back(std::move(analysis));
  }
  return analyses;
}

// "mixing" or a non-negative integer.
absl::StatusOr<std::int64_t> ResolveSteps(const std::string& text,
                                          const GraphAnalysis& analysis) {
  if (text == "mixing") {
    if (!analysis.spectral.mixing_time) {
      return absl::FailedPreconditionError(
          absl::StrCat(analysis.name, " is bipartite; no mixing time"));
    }
    return *analysis.spectral.mixing_time;
  }
  std::int64_t steps;
  if (!absl::SimpleAtoi(text, &steps) || steps < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("--steps wants an integer >= 0 or \"mixing\", got \"",
                     text, "\""));
  }
  return steps;
}

absl::Status Emit(const CsvTable& table, const std::string& out) {
  if (out == "-") {
    table.Write(std::cout);
    return absl::OkStatus();
  }
  return table.WriteFile(out);
}

struct AmplifyFlags {
  std::string protocol = "all";
  std::string scenario = "stationary";
  double epsilon0 = 1.0;
  double delta0 = 0.0;
  std::optional<std::int64_t> n;
  std::optional<double> sum_p_squared;
  double rho_star = 1.0;
  std::string steps = "mixing";
  bool proof_scaling = false;
};

absl::Status RunAmplify(const CommonFlags& common, const AmplifyFlags& flags) {
  NETSHUFFLE_ASSIGN_OR_RETURN(const Protocol protocol,
                              ParseProtocol(flags.protocol));
  NETSHUFFLE_ASSIGN_OR_RETURN(const Distribution scenario,
                              ParseDistribution(flags.scenario));
  const LocalPrivacyParams local{flags.epsilon0, flags.delta0};
  CsvTable table = NewAmplifyTable();
  table.AddMetadata("delta_defaults", "delta=delta2=1/n^2 delta1=1/n^3");
  AmplificationInputs inputs;
  std::string source;
  std::optional<std::int64_t> steps;
  if (flags.n.has_value()) {
    if (!flags.sum_p_squared.has_value()) {
      return absl::InvalidArgumentError("--n needs --sum-p2");
    }
    NETSHUFFLE_ASSIGN_OR_RETURN(const Deltas deltas,
                                ResolveDeltas(*flags.n, common.overrides()));
    inputs.node_count = *flags.n;
    inputs.sum_p_squared = *flags.sum_p_squared;
    inputs.rho_star = flags.rho_star;
    inputs.delta = deltas.delta;
    inputs.delta1 = deltas.delta1;
    inputs.delta2 = deltas.delta2;
    source = "direct";
  } else {
    NETSHUFFLE_ASSIGN_OR_RETURN(const auto graphs, LoadGraphs(common, {}));
    if (graphs.size() != 1) {
      return absl::InvalidArgumentError("amplify takes one --dataset");
    }
    NETSHUFFLE_ASSIGN_OR_RETURN(const GraphAnalysis analysis,
                                AnalyzeGraph(graphs[0]));
    NETSHUFFLE_ASSIGN_OR_RETURN(steps, ResolveSteps(flags.steps, analysis));
    NETSHUFFLE_ASSIGN_OR_RETURN(
        const Deltas deltas,
        ResolveDeltas(graphs[0].graph.node_count(), common.overrides()));
    NETSHUFFLE_ASSIGN_OR_RETURN(
        inputs, InputsForGraph(graphs[0].graph, analysis, scenario, *steps,
                               deltas));
    source = graphs[0].name;
  }
  if (flags.proof_scaling) {
    inputs.epsilon1_scaling = Epsilon1Scaling::kNMinusOne;
    table.AddMetadata("epsilon1_scaling", "n-1");
  }
  NETSHUFFLE_ASSIGN_OR_RETURN(const AmplificationResult result,
                              Amplify(protocol, scenario, local, inputs));
  NETSHUFFLE_RETURN_IF_ERROR(AppendAmplifyRow(table, source, steps, result));
  return Emit(table, common.out);
}

struct SimulateFlags {
  std::string steps = "mixing";
  std::int64_t trials = 100;
  double epsilon0 = 1.0;
};

absl::Status RunSimulate(const CommonFlags& common,
                         const SimulateFlags& flags) {
  NETSHUFFLE_ASSIGN_OR_RETURN(const auto graphs, LoadGraphs(common, {}));
  if (graphs.size() != 1) {
    return absl::InvalidArgumentError("simulate takes one --dataset");
  }
  NETSHUFFLE_ASSIGN_OR_RETURN(const GraphAnalysis analysis,
                              AnalyzeGraph(graphs[0]));
  SimulateSpec spec;
  NETSHUFFLE_ASSIGN_OR_RETURN(spec.steps, ResolveSteps(flags.steps, analysis));
  spec.trials = flags.trials;
  spec.seed = common.seed;
  spec.epsilon0 = flags.epsilon0;
  spec.deltas = common.overrides();
  NETSHUFFLE_ASSIGN_OR_RETURN(const CsvTable table,
                              SimulateTable(graphs[0], analysis, spec));
  return Emit(table, common.out);
}

struct UtilityFlags {
  std::vector<double> targets = {0.5, 1.0, 2.0, 4.0};
  int seeds = 20;
  int dimension = 200;
  std::string steps = "mixing";
};

absl::StatusOr<UtilitySpec> MakeUtilitySpec(const CommonFlags& common,
                                            const UtilityFlags& flags,
                                            const GraphAnalysis& analysis) {
  UtilitySpec spec;
  spec.central_targets = flags.targets;
  spec.seeds = flags.seeds;
  spec.dimension = flags.dimension;
  spec.seed = common.seed;
  spec.deltas = common.overrides();
  NETSHUFFLE_ASSIGN_OR_RETURN(spec.steps, ResolveSteps(flags.steps, analysis));
  return spec;
}

absl::Status RunUtilityCommand(const CommonFlags& common,
                               const UtilityFlags& flags) {
  NETSHUFFLE_ASSIGN_OR_RETURN(const auto graphs,
                              LoadGraphs(common, {"twitch"}));
  NETSHUFFLE_ASSIGN_OR_RETURN(const GraphAnalysis analysis,
                              AnalyzeGraph(graphs[0]));
  NETSHUFFLE_ASSIGN_OR_RETURN(const UtilitySpec spec,
                              MakeUtilitySpec(common, flags, analysis));
  NETSHUFFLE_ASSIGN_OR_RETURN(const UtilityResult result,
                              RunUtility(graphs[0], analysis, spec));
  return Emit(result.table, common.out);
}

struct FigureFlags {
  std::string which;
  double epsilon0 = 1.0;
  std::vector<double> epsilon0_grid;
  std::vector<std::int64_t> steps;
  Figure4Spec fig4;
  UtilityFlags utility;
};

absl::Status RunFigure(const CommonFlags& common, const FigureFlags& flags) {
  FigureOptions options;
  options.epsilon0 = flags.epsilon0;
  options.epsilon0_grid = flags.epsilon0_grid;
  options.steps = flags.steps;
  options.deltas = common.overrides();
  CsvTable table("empty", {});
  if (flags.which == "fig3" || flags.which == "fig5") {
    const std::vector<std::string> fallback =
        flags.which == "fig3"
            ? std::vector<std::string>{"facebook", "twitch", "deezer"}
            : std::vector<std::string>{"facebook", "twitch", "deezer", "enron",
                                       "google"};
    NETSHUFFLE_ASSIGN_OR_RETURN(const auto graphs, LoadGraphs(common, fallback));
    NETSHUFFLE_ASSIGN_OR_RETURN(const auto analyses, Analyze(graphs));
    if (flags.which == "fig3") {
      NETSHUFFLE_ASSIGN_OR_RETURN(table, Figure3(analyses, options));
    } else {
      NETSHUFFLE_ASSIGN_OR_RETURN(table, Figure5(analyses, options));
    }
  } else if (flags.which == "fig4") {
    Figure4Spec spec = flags.fig4;
    spec.seed = common.seed;
    NETSHUFFLE_ASSIGN_OR_RETURN(table, Figure4(spec, options));
  } else if (flags.which == "fig7") {
    NETSHUFFLE_ASSIGN_OR_RETURN(table, Figure7({}, options));
  } else if (flags.which == "fig8") {
    NETSHUFFLE_ASSIGN_OR_RETURN(const auto graphs,
                                LoadGraphs(common, {"twitch"}));
    NETSHUFFLE_ASSIGN_OR_RETURN(const GraphAnalysis analysis,
                                AnalyzeGraph(graphs[0]));
    NETSHUFFLE_ASSIGN_OR_RETURN(
        const UtilitySpec spec,
        MakeUtilitySpec(common, flags.utility, analysis));
    NETSHUFFLE_ASSIGN_OR_RETURN(table, Figure8(graphs[0], analysis, spec));
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown figure \"", flags.which, "\""));
  }
  return Emit(table, common.out);
}

absl::Status RunGraphStats(const CommonFlags& common) {
  NETSHUFFLE_ASSIGN_OR_RETURN(const auto graphs, LoadGraphs(common, {}));
  NETSHUFFLE_ASSIGN_OR_RETURN(const auto analyses, Analyze(graphs));
  return Emit(GraphStatsTable(analyses), common.out);
}

int Main(int argc, char** argv) {
  CLI::App app{"Network shuffling: random-walk report exchange and its "
               "central differential privacy"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonFlags common;

  CLI::App* stats = app.add_subcommand(
      "graph-stats", "n, m, irregularity and spectral summary per graph");
  AddCommon(stats, common, true);

  AmplifyFlags amplify;
  CLI::App* amp =
      app.add_subcommand("amplify", "Central (epsilon, delta) for one input");
  AddCommon(amp, common, true);
  amp->add_option("--protocol", amplify.protocol, "all|single")
      ->check(CLI::IsMember({"all", "single"}));
  amp->add_option("--scenario", amplify.scenario, "stationary|symmetric")
      ->check(CLI::IsMember({"stationary", "symmetric"}));
  amp->add_option("--eps0", amplify.epsilon0, "Local epsilon0");
  amp->add_option("--delta0", amplify.delta0, "Local delta0 (0 = pure)");
  amp->add_option("--n", amplify.n, "Node count, instead of --dataset");
  amp->add_option("--sum-p2", amplify.sum_p_squared, "sum_i P_i^2 with --n");
  amp->add_option("--rho-star", amplify.rho_star, "rho* with --n");
  amp->add_option("--steps", amplify.steps, "Rounds or \"mixing\"");
  amp->add_flag("--proof-scaling", amplify.proof_scaling,
                "Use the (n - 1) epsilon1 scaling instead of (1 - 1/n)");

  SimulateFlags simulate;
  CLI::App* sim = app.add_subcommand(
      "simulate", "Monte Carlo report allocations, one row per trial");
  AddCommon(sim, common, true);
  sim->add_option("--steps", simulate.steps, "Rounds or \"mixing\"");
  sim->add_option("--trials", simulate.trials, "Number of trials")
      ->check(CLI::NonNegativeNumber);
  sim->add_option("--eps0", simulate.epsilon0,
                  "epsilon0 for the per-allocation accountant");

  UtilityFlags utility;
  CLI::App* util = app.add_subcommand(
      "utility", "Mean-estimation error of both protocols at matched epsilon");
  AddCommon(util, common, true);
  auto add_utility = [](CLI::App* sub, UtilityFlags& flags) {
    sub->add_option("--central", flags.targets, "Central epsilon targets")
        ->delimiter(',');
    sub->add_option("--trials", flags.seeds, "Seeds per point");
    sub->add_option("--dimension", flags.dimension, "Data dimension");
    sub->add_option("--steps", flags.steps, "Rounds or \"mixing\"");
  };
  add_utility(util, utility);

  FigureFlags figure;
  CLI::App* fig = app.add_subcommand("figure", "CSV data behind a figure");
  AddCommon(fig, common, true);
  fig->add_option("which", figure.which, "fig3|fig4|fig5|fig7|fig8")
      ->required()
      ->check(CLI::IsMember({"fig3", "fig4", "fig5", "fig7", "fig8"}));
  fig->add_option("--eps0", figure.epsilon0, "epsilon0 for fig3/fig4");
  fig->add_option("--eps0-grid", figure.epsilon0_grid,
                  "epsilon0 values for fig5/fig7")
      ->delimiter(',');
  fig->add_option("--rounds", figure.steps, "Explicit rounds for fig3/fig4")
      ->delimiter(',');
  fig->add_option("--n", figure.fig4.node_count, "fig4 node count");
  fig->add_option("--degrees", figure.fig4.degrees, "fig4 degrees")
      ->delimiter(',');
  fig->add_option("--graphs", figure.fig4.seeds, "fig4 graphs per degree");
  fig->add_option("--max-steps", figure.fig4.max_steps, "fig4 last round");
  add_utility(fig, figure.utility);

  CLI11_PARSE(app, argc, argv);

  absl::Status status;
  if (stats->parsed()) {
    status = RunGraphStats(common);
  } else if (amp->parsed()) {
    status = RunAmplify(common, amplify);
  } else if (sim->parsed()) {
    status = RunSimulate(common, simulate);
  } else if (util->parsed()) {
    status = RunUtilityCommand(common, utility);
  } else if (fig->parsed()) {
    status = RunFigure(common, figure);
  }
  if (!status.ok()) {
    std::cerr << "netshuffle: " << status << "\n";
    return status.code() == absl::StatusCode::kNotFound ? 2 : 1;
  }
  return 0;
}

}  // namespace
}  // namespace netshuffle

int main(int argc, char** argv) { return netshuffle::Main(argc, argv); }
