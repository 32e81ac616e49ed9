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

#ifndef NETSHUFFLE_GRAPH_H_
#define NETSHUFFLE_GRAPH_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace netshuffle {

// Dense node index in [0, node_count).
using NodeId = std::int32_t;

// Immutable simple undirected graph in compressed sparse row form.
//
// Adjacency lists are sorted and free of self-loops and duplicates, so
// A is a symmetric 0/1 matrix and sum of degrees equals 2 * edge_count.
// Each dense node remembers the identifier it had in the source data.
class Graph {
 public:
  Graph() = default;

  // Builds a graph over [0, node_count) from undirected pairs. Self-loops
  // and repeated pairs (in either orientation) are dropped. original_ids,
  // when given, must have node_count entries; otherwise node i keeps id i.
  static absl::StatusOr<Graph> FromEdges(
      NodeId node_count, std::span<const std::pair<NodeId, NodeId>> edges,
      std::vector<std::int64_t> original_ids = {});

  std::int64_t node_count() const {
    return static_cast<std::int64_t>(degrees_.size());
  }
  std::int64_t edge_count() const { return edge_count_; }

  std::int64_t degree(NodeId node) const { return degrees_[node]; }
  std::span<const std::int64_t> degrees() const { return degrees_; }

  std::span<const NodeId> neighbors(NodeId node) const {
    return {adjacency_.data() + offsets_[node],
            adjacency_.data() + offsets_[node + 1]};
  }

  std::int64_t original_id(NodeId node) const { return original_ids_[node]; }
  std::span<const std::int64_t> original_ids() const { return original_ids_; }

  std::int64_t min_degree() const;
  std::int64_t max_degree() const;
  bool is_regular() const { return min_degree() == max_degree(); }

  // Sum of squared degrees, exact.
  std::int64_t degree_square_sum() const;

 private:
  std::vector<std::int64_t> offsets_{0};
  std::vector<NodeId> adjacency_;
  std::vector<std::int64_t> degrees_;
  std::vector<std::int64_t> original_ids_;
  std::int64_t edge_count_ = 0;
};

// Bookkeeping from edge-list ingestion.
struct EdgeListStats {
  std::int64_t data_lines = 0;
  std::int64_t self_loops_dropped = 0;
  std::int64_t duplicates_dropped = 0;
  // Directed arcs whose reverse arc was absent from the input. Only counted
  // when symmetrizing.
  std::int64_t unreciprocated_arcs = 0;
  bool header_skipped = false;
};

// Parses an edge list: one node pair per line, separated by whitespace or
// commas. Lines starting with '#' or '%' are comments. A single non-numeric
// line before the first pair (a CSV header such as "id_1,id_2") is skipped.
//
// With symmetrize=false each line is an undirected edge. With
// symmetrize=true each line is a directed arc and the reverse arc is added.
// Both produce the same simple undirected graph; they differ only in how
// dropped lines are accounted in `stats`. Node identifiers are remapped to
// dense indices in increasing order of original identifier.
absl::StatusOr<Graph> ParseEdgeList(std::istream& in, bool symmetrize,
                                    EdgeListStats* stats = nullptr);

absl::StatusOr<Graph> LoadEdgeList(const std::filesystem::path& path,
                                   bool symmetrize,
                                   EdgeListStats* stats = nullptr);

// Induced subgraph on the largest connected component. Ties go to the
// component containing the smallest original node identifier.
Graph LargestConnectedComponent(const Graph& graph);

// Induced subgraph on `nodes` (any order, duplicates ignored). Dense order
// follows the parent graph.
Graph InducedSubgraph(const Graph& graph, std::span<const NodeId> nodes);

// Nodes in breadth-first order from root, at most `limit` of them.
std::vector<NodeId> BreadthFirstOrder(const Graph& graph, NodeId root,
                                      std::size_t limit);

struct ErgodicityCheck {
  bool is_connected = false;
  bool is_bipartite = false;
  // A simple random walk converges to its stationary distribution from any
  // start iff the graph is connected and not bipartite.
  bool ergodic() const { return is_connected && !is_bipartite; }
};

ErgodicityCheck CheckErgodic(const Graph& graph);

// Probability of a report sitting at each node, either after a number of
// walk steps or at stationarity (time_step empty).
struct PositionDistribution {
  std::vector<double> probabilities;
  std::optional<std::int64_t> time_step;

  bool is_stationary() const { return !time_step.has_value(); }
  std::size_t size() const { return probabilities.size(); }

  // Sum_i P_i^2.
  double SumOfSquares() const;

  // Entries in [0, 1] summing to 1 within `tolerance`.
  absl::Status Validate(double tolerance = 1e-9) const;

  static PositionDistribution Delta(std::size_t size, NodeId node);
  static PositionDistribution Uniform(std::size_t size);
};

// pi_i = k(i) / 2m. Fails on a disconnected graph.
absl::StatusOr<PositionDistribution> StationaryDistribution(const Graph& graph);

struct GraphSummary {
  std::int64_t node_count = 0;
  std::int64_t edge_count = 0;
  // Irregularity n * sum_i pi_i^2; 1 exactly for regular graphs.
  double gamma = 0.0;
  double sum_pi_squared = 0.0;
  bool is_bipartite = false;
  bool is_connected = false;
};

GraphSummary SummarizeGraph(const Graph& graph);

// Uniformly-flavoured random k-regular simple graph built with the pairing
// model: stubs are paired at random, pairs that would form a self-loop or
// repeated edge are rejected and their stubs re-paired; a dead end restarts
// the construction. Requires n * k even and 0 < k < n.
absl::StatusOr<Graph> RandomRegularGraph(NodeId node_count, int degree,
                                         std::uint64_t seed);

// Small named graphs used throughout the tests and benchmarks.
Graph CompleteGraph(NodeId node_count);
Graph CycleGraph(NodeId node_count);
// Star with one hub (node 0) and `leaves` leaves.
Graph StarGraph(NodeId leaves);

// Maps dataset names (facebook, twitch, deezer, enron, google, ...) to edge
// list files. Text format: one "name path" pair per line, '#' comments.
// Relative paths resolve against the manifest's directory.
class DatasetManifest {
 public:
  static absl::StatusOr<DatasetManifest> Load(
      const std::filesystem::path& path);
  static absl::StatusOr<DatasetManifest> Parse(
      std::istream& in, const std::filesystem::path& base_dir);

  // Path for a dataset; NotFound names the entry and the manifest when the
  // entry or the file is missing.
  absl::StatusOr<std::filesystem::path> Resolve(const std::string& name) const;
  bool Contains(const std::string& name) const;

  const std::map<std::string, std::filesystem::path>& entries() const {
    return entries_;
  }

 private:
  std::filesystem::path source_;
  std::map<std::string, std::filesystem::path> entries_;
};

// Loads a manifest dataset, symmetrizes it, and returns its largest
// connected component.
absl::StatusOr<Graph> LoadDataset(const DatasetManifest& manifest,
                                  const std::string& name);

}  // namespace netshuffle

#endif  // NETSHUFFLE_GRAPH_H_
