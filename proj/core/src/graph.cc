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

#include "netshuffle/graph.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/ascii.h"
#include "netshuffle/rng.h"

namespace netshuffle {
namespace {

using Pair = std::pair<NodeId, NodeId>;

std::uint64_t PairKey(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

bool IsSeparator(char c) {
  return c == ' ' || c == '\t' || c == ',' || c == '\r' || c == ';';
}

// Splits a data line into tokens. Returns false if it is blank.
void Tokenize(absl::string_view line, std::vector<absl::string_view>& out) {
  out.clear();
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && IsSeparator(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !IsSeparator(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
}

bool ParseInt(absl::string_view token, std::int64_t& value) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

// Labels connected components; returns the number of components.
NodeId LabelComponents(const Graph& graph, std::vector<NodeId>& label) {
  const auto n = static_cast<NodeId>(graph.node_count());
  label.assign(n, -1);
  std::vector<NodeId> queue;
  queue.reserve(n);
  NodeId components = 0;
  for (NodeId s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    label[s] = components;
    queue.clear();
    queue.push_back(s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (NodeId v : graph.neighbors(queue[head])) {
        if (label[v] < 0) {
          label[v] = components;
          queue.push_back(v);
        }
      }
    }
    ++components;
  }
  return components;
}

}  // namespace

absl::StatusOr<Graph> Graph::FromEdges(NodeId node_count,
                                       std::span<const Pair> edges,
                                       std::vector<std::int64_t> original_ids) {
  if (node_count <= 0) return absl::InvalidArgumentError("empty graph");
  if (!original_ids.empty() &&
      original_ids.size() != static_cast<std::size_t>(node_count)) {
    return absl::InvalidArgumentError(
        absl::StrCat("original_ids has ", original_ids.size(),
                     " entries for ", node_count, " nodes"));
  }
  std::vector<std::uint64_t> keys;
  keys.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= node_count || v >= node_count) {
      return absl::OutOfRangeError(
          absl::StrCat("edge (", u, ", ", v, ") outside [0, ", node_count,
                       ")"));
    }
    if (u != v) keys.push_back(PairKey(u, v));
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  Graph g;
  g.edge_count_ = static_cast<std::int64_t>(keys.size());
  g.degrees_.assign(node_count, 0);
  for (std::uint64_t key : keys) {
    ++g.degrees_[static_cast<NodeId>(key >> 32)];
    ++g.degrees_[static_cast<NodeId>(key & 0xffffffffu)];
  }
  g.offsets_.assign(node_count + 1, 0);
  for (NodeId i = 0; i < node_count; ++i) {
    g.offsets_[i + 1] = g.offsets_[i] + g.degrees_[i];
  }
  g.adjacency_.resize(g.offsets_.back());
  std::vector<std::int64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  // Keys are sorted by (u, v) with u < v, so pushing v into u's list and u
  // into v's list in key order leaves every list sorted.
  for (std::uint64_t key : keys) {
    const auto u = static_cast<NodeId>(key >> 32);
    const auto v = static_cast<NodeId>(key & 0xffffffffu);
    g.adjacency_[cursor[u]++] = v;
  }
  for (std::uint64_t key : keys) {
    const auto u = static_cast<NodeId>(key >> 32);
    const auto v = static_cast<NodeId>(key & 0xffffffffu);
    g.adjacency_[cursor[v]++] = u;
  }
  for (NodeId i = 0; i < node_count; ++i) {
    std::sort(g.adjacency_.begin() + g.offsets_[i],
              g.adjacency_.begin() + g.offsets_[i + 1]);
  }
  if (original_ids.empty()) {
    original_ids.resize(node_count);
    std::iota(original_ids.begin(), original_ids.end(), 0);
  }
  g.original_ids_ = std::move(original_ids);
  return g;
}

std::int64_t Graph::min_degree() const {
  if (degrees_.empty()) return 0;
  return *std::min_element(degrees_.begin(), degrees_.end());
}

std::int64_t Graph::max_degree() const {
  if (degrees_.empty()) return 0;
  return *std::max_element(degrees_.begin(), degrees_.end());
}

std::int64_t Graph::degree_square_sum() const {
  std::int64_t total = 0;
  for (std::int64_t k : degrees_) total += k * k;
  return total;
}

absl::StatusOr<Graph> ParseEdgeList(std::istream& in, bool symmetrize,
                                    EdgeListStats* stats) {
  EdgeListStats local;
  std::vector<std::pair<std::int64_t, std::int64_t>> arcs;
  std::vector<absl::string_view> tokens;
  std::string line;
  std::int64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    absl::string_view view = absl::StripAsciiWhitespace(line);
    if (view.empty() || view.front() == '#' || view.front() == '%') continue;
    Tokenize(view, tokens);
    if (tokens.empty()) continue;
    std::int64_t u = 0;
    std::int64_t v = 0;
    const bool numeric =
        tokens.size() == 2 && ParseInt(tokens[0], u) && ParseInt(tokens[1], v);
    if (!numeric) {
      const bool header_candidate = arcs.empty() && !local.header_skipped &&
                                    tokens.size() == 2 &&
                                    !ParseInt(tokens[0], u) &&
                                    !ParseInt(tokens[1], v);
      if (header_candidate) {
        local.header_skipped = true;
        continue;
      }
      return absl::InvalidArgumentError(
          absl::StrCat("parse error at line ", line_number,
                       ": expected two integer node ids, got \"", view, "\""));
    }
    ++local.data_lines;
    arcs.emplace_back(u, v);
  }
  if (arcs.empty()) return absl::InvalidArgumentError("empty graph");

  std::vector<std::int64_t> ids;
  ids.reserve(arcs.size() * 2);
  for (const auto& [u, v] : arcs) {
    ids.push_back(u);
    ids.push_back(v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() > static_cast<std::size_t>(INT32_MAX)) {
    return absl::ResourceExhaustedError("too many nodes");
  }
  auto dense = [&ids](std::int64_t id) {
    return static_cast<NodeId>(
        std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };

  std::vector<Pair> edges;
  edges.reserve(arcs.size());
  std::vector<std::uint64_t> directed;  // only for reciprocity accounting
  if (symmetrize) directed.reserve(arcs.size());
  for (const auto& [u, v] : arcs) {
    const NodeId a = dense(u);
    const NodeId b = dense(v);
    if (a == b) {
      ++local.self_loops_dropped;
      continue;
    }
    edges.emplace_back(a, b);
    if (symmetrize) {
      directed.push_back((static_cast<std::uint64_t>(a) << 32) |
                         static_cast<std::uint32_t>(b));
    }
  }
  if (symmetrize) {
    std::sort(directed.begin(), directed.end());
    const std::size_t before = directed.size();
    directed.erase(std::unique(directed.begin(), directed.end()),
                   directed.end());
    local.duplicates_dropped = static_cast<std::int64_t>(before - directed.size());
    for (std::uint64_t arc : directed) {
      const std::uint64_t reverse = (arc << 32) | (arc >> 32);
      if (!std::binary_search(directed.begin(), directed.end(), reverse)) {
        ++local.unreciprocated_arcs;
      }
    }
  }

  auto graph = Graph::FromEdges(static_cast<NodeId>(ids.size()), edges,
                                std::vector<std::int64_t>(ids.begin(), ids.end()));
  if (!graph.ok()) return graph.status();
  if (graph->edge_count() == 0) return absl::InvalidArgumentError("empty graph");
  if (!symmetrize) {
    local.duplicates_dropped =
        static_cast<std::int64_t>(edges.size()) - graph->edge_count();
  }
  if (stats != nullptr) *stats = local;
  return graph;
}

absl::StatusOr<Graph> LoadEdgeList(const std::filesystem::path& path,
                                   bool symmetrize, EdgeListStats* stats) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrCat("cannot open edge list ", path.string()));
  }
  auto graph = ParseEdgeList(in, symmetrize, stats);
  if (!graph.ok()) {
    return absl::Status(graph.status().code(),
                        absl::StrCat(path.string(), ": ",
                                     graph.status().message()));
  }
  return graph;
}

Graph InducedSubgraph(const Graph& graph, std::span<const NodeId> nodes) {
  std::vector<NodeId> kept(nodes.begin(), nodes.end());
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  std::vector<NodeId> remap(graph.node_count(), -1);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    remap[kept[i]] = static_cast<NodeId>(i);
  }
  std::vector<Pair> edges;
  std::vector<std::int64_t> ids;
  ids.reserve(kept.size());
  for (NodeId u : kept) {
    ids.push_back(graph.original_id(u));
    for (NodeId v : graph.neighbors(u)) {
      if (u < v && remap[v] >= 0) edges.emplace_back(remap[u], remap[v]);
    }
  }
  if (kept.empty()) return Graph();
  return *Graph::FromEdges(static_cast<NodeId>(kept.size()), edges,
                           std::move(ids));
}

Graph LargestConnectedComponent(const Graph& graph) {
  std::vector<NodeId> label;
  const NodeId components = LabelComponents(graph, label);
  if (components <= 1) return graph;
  std::vector<std::int64_t> size(components, 0);
  std::vector<std::int64_t> min_id(components, INT64_MAX);
  for (NodeId i = 0; i < static_cast<NodeId>(label.size()); ++i) {
    ++size[label[i]];
    min_id[label[i]] = std::min(min_id[label[i]], graph.original_id(i));
  }
  NodeId best = 0;
  for (NodeId c = 1; c < components; ++c) {
    if (size[c] > size[best] ||
        (size[c] == size[best] && min_id[c] < min_id[best])) {
      best = c;
    }
  }
  std::vector<NodeId> nodes;
  nodes.reserve(size[best]);
  for (NodeId i = 0; i < static_cast<NodeId>(label.size()); ++i) {
    if (label[i] == best) nodes.push_back(i);
  }
  return InducedSubgraph(graph, nodes);
}

std::vector<NodeId> BreadthFirstOrder(const Graph& graph, NodeId root,
                                      std::size_t limit) {
  std::vector<NodeId> order;
  if (limit == 0 || root < 0 || root >= graph.node_count()) return order;
  std::vector<char> seen(graph.node_count(), 0);
  order.push_back(root);
  seen[root] = 1;
  for (std::size_t head = 0; head < order.size() && order.size() < limit;
       ++head) {
    for (NodeId v : graph.neighbors(order[head])) {
      if (seen[v]) continue;
      seen[v] = 1;
      order.push_back(v);
      if (order.size() == limit) break;
    }
  }
  return order;
}

ErgodicityCheck CheckErgodic(const Graph& graph) {
  ErgodicityCheck check;
  const auto n = static_cast<NodeId>(graph.node_count());
  if (n == 0) return check;
  std::vector<int> color(n, -1);
  std::vector<NodeId> queue;
  queue.reserve(n);
  int components = 0;
  bool bipartite = true;
  for (NodeId s = 0; s < n; ++s) {
    if (color[s] >= 0) continue;
    ++components;
    color[s] = 0;
    queue.clear();
    queue.push_back(s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId u = queue[head];
      for (NodeId v : graph.neighbors(u)) {
        if (color[v] < 0) {
          color[v] = 1 - color[u];
          queue.push_back(v);
        } else if (color[v] == color[u]) {
          bipartite = false;
        }
      }
    }
  }
  check.is_connected = components == 1;
  check.is_bipartite = bipartite;
  return check;
}

double PositionDistribution::SumOfSquares() const {
  double total = 0.0;
  for (double p : probabilities) total += p * p;
  return total;
}

absl::Status PositionDistribution::Validate(double tolerance) const {
  if (probabilities.empty()) {
    return absl::InvalidArgumentError("distribution has no entries");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    const double p = probabilities[i];
    if (!(p >= 0.0 && p <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("probability ", p, " at node ", i, " outside [0, 1]"));
    }
    total += p;
  }
  if (std::abs(total - 1.0) > tolerance) {
    return absl::InvalidArgumentError(
        absl::StrCat("probabilities sum to ", total));
  }
  return absl::OkStatus();
}

PositionDistribution PositionDistribution::Delta(std::size_t size,
                                                 NodeId node) {
  PositionDistribution d{std::vector<double>(size, 0.0), 0};
  d.probabilities[node] = 1.0;
  return d;
}

PositionDistribution PositionDistribution::Uniform(std::size_t size) {
  return PositionDistribution{
      std::vector<double>(size, 1.0 / static_cast<double>(size)),
      std::nullopt};
}

absl::StatusOr<PositionDistribution> StationaryDistribution(
    const Graph& graph) {
  if (graph.node_count() == 0 || !CheckErgodic(graph).is_connected) {
    return absl::FailedPreconditionError(
        "stationary distribution requires a connected graph");
  }
  const double two_m = 2.0 * static_cast<double>(graph.edge_count());
  PositionDistribution pi;
  pi.probabilities.resize(graph.node_count());
  for (NodeId i = 0; i < graph.node_count(); ++i) {
    pi.probabilities[i] = static_cast<double>(graph.degree(i)) / two_m;
  }
  return pi;
}

GraphSummary SummarizeGraph(const Graph& graph) {
  GraphSummary summary;
  summary.node_count = graph.node_count();
  summary.edge_count = graph.edge_count();
  const ErgodicityCheck check = CheckErgodic(graph);
  summary.is_connected = check.is_connected;
  summary.is_bipartite = check.is_bipartite;
  if (graph.edge_count() == 0) return summary;
  // sum_i pi_i^2 = sum_i k_i^2 / (2m)^2, kept in integers until the last
  // division so that regular graphs give gamma == 1 exactly.
  const auto square_sum = static_cast<long double>(graph.degree_square_sum());
  const auto two_m = 2.0L * static_cast<long double>(graph.edge_count());
  const long double n = static_cast<long double>(graph.node_count());
  summary.sum_pi_squared = static_cast<double>(square_sum / (two_m * two_m));
  summary.gamma = static_cast<double>((n * square_sum) / (two_m * two_m));
  return summary;
}

absl::StatusOr<Graph> RandomRegularGraph(NodeId node_count, int degree,
                                         std::uint64_t seed) {
  if (degree <= 0 || degree >= node_count) {
    return absl::InvalidArgumentError(
        absl::StrCat("degree ", degree, " must lie in (0, ", node_count, ")"));
  }
  if ((static_cast<std::int64_t>(node_count) * degree) % 2 != 0) {
    return absl::InvalidArgumentError("node_count * degree must be even");
  }
  Rng rng = MakeStream(seed, 0x7265677561ULL);
  constexpr int kMaxAttempts = 1000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::unordered_set<std::uint64_t> edges;
    edges.reserve(static_cast<std::size_t>(node_count) * degree);
    std::vector<NodeId> stubs;
    stubs.reserve(static_cast<std::size_t>(node_count) * degree);
    for (int r = 0; r < degree; ++r) {
      for (NodeId v = 0; v < node_count; ++v) stubs.push_back(v);
    }
    bool failed = false;
    while (!stubs.empty()) {
      for (std::size_t i = stubs.size(); i > 1; --i) {
        std::swap(stubs[i - 1], stubs[UniformIndex(rng, i)]);
      }
      std::vector<NodeId> leftover;
      for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
        const NodeId u = stubs[i];
        const NodeId v = stubs[i + 1];
        if (u != v && edges.insert(PairKey(u, v)).second) continue;
        leftover.push_back(u);
        leftover.push_back(v);
      }
      if (leftover.empty()) break;
      // Dead end unless some pair of leftover stubs can still be joined.
      std::vector<NodeId> distinct(leftover);
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()),
                     distinct.end());
      bool joinable = false;
      for (std::size_t i = 0; i < distinct.size() && !joinable; ++i) {
        for (std::size_t j = i + 1; j < distinct.size(); ++j) {
          if (!edges.contains(PairKey(distinct[i], distinct[j]))) {
            joinable = true;
            break;
          }
        }
      }
      if (!joinable) {
        failed = true;
        break;
      }
      stubs = std::move(leftover);
    }
    if (failed) continue;
    std::vector<Pair> pairs;
    pairs.reserve(edges.size());
    for (std::uint64_t key : edges) {
      pairs.emplace_back(static_cast<NodeId>(key >> 32),
                         static_cast<NodeId>(key & 0xffffffffu));
    }
    return Graph::FromEdges(node_count, pairs);
  }
  return absl::ResourceExhaustedError(
      absl::StrCat("no simple ", degree, "-regular graph on ", node_count,
                   " nodes after ", kMaxAttempts, " attempts"));
}

Graph CompleteGraph(NodeId node_count) {
  std::vector<Pair> edges;
  for (NodeId u = 0; u < node_count; ++u) {
    for (NodeId v = u + 1; v < node_count; ++v) edges.emplace_back(u, v);
  }
  return *Graph::FromEdges(node_count, edges);
}

Graph CycleGraph(NodeId node_count) {
  std::vector<Pair> edges;
  for (NodeId u = 0; u < node_count; ++u) {
    edges.emplace_back(u, (u + 1) % node_count);
  }
  return *Graph::FromEdges(node_count, edges);
}

Graph StarGraph(NodeId leaves) {
  std::vector<Pair> edges;
  for (NodeId v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
  return *Graph::FromEdges(leaves + 1, edges);
}

absl::StatusOr<DatasetManifest> DatasetManifest::Parse(
    std::istream& in, const std::filesystem::path& base_dir) {
  DatasetManifest manifest;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    absl::string_view view = absl::StripAsciiWhitespace(line);
    if (view.empty() || view.front() == '#') continue;
    std::vector<absl::string_view> parts =
        absl::StrSplit(view, absl::ByAnyChar(" \t="), absl::SkipEmpty());
    if (parts.size() != 2) {
      return absl::InvalidArgumentError(absl::StrCat(
          "manifest line ", line_number, ": expected \"name path\""));
    }
    std::filesystem::path path{std::string(parts[1])};
    if (path.is_relative()) path = base_dir / path;
    manifest.entries_[std::string(parts[0])] = path;
  }
  return manifest;
}

absl::StatusOr<DatasetManifest> DatasetManifest::Load(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrCat("cannot open manifest ", path.string()));
  }
  auto manifest = Parse(in, path.parent_path());
  if (manifest.ok()) manifest->source_ = path;
  return manifest;
}

bool DatasetManifest::Contains(const std::string& name) const {
  return entries_.contains(name);
}

absl::StatusOr<std::filesystem::path> DatasetManifest::Resolve(
    const std::string& name) const {
  const std::string where =
      source_.empty() ? std::string("manifest") : source_.string();
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    return absl::NotFoundError(
        absl::StrCat("dataset \"", name, "\" has no entry in ", where));
  }
  if (!std::filesystem::exists(it->second)) {
    return absl::NotFoundError(absl::StrCat(
        "dataset \"", name, "\" listed in ", where, " points to missing file ",
        it->second.string()));
  }
  return it->second;
}

absl::StatusOr<Graph> LoadDataset(const DatasetManifest& manifest,
                                  const std::string& name) {
  auto path = manifest.Resolve(name);
  if (!path.ok()) return path.status();
  auto graph = LoadEdgeList(*path, /*symmetrize=*/true);
  if (!graph.ok()) return graph.status();
  return LargestConnectedComponent(*graph);
}

}  // namespace netshuffle
