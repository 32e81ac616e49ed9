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

#ifndef NETSHUFFLE_WALK_H_
#define NETSHUFFLE_WALK_H_

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "netshuffle/graph.h"

namespace netshuffle {

// Report j is the report injected by user j at time zero.
using ReportId = std::int32_t;

// Number of reports each user holds after the final exchange round.
struct ReportAllocation {
  std::vector<std::int64_t> counts;

  std::int64_t total() const;
  double l2_norm() const;
  std::int64_t max_load() const;
  std::int64_t empty_nodes() const;
};

// One realization of the exchange: where every report ended up.
struct WalkTrace {
  std::vector<NodeId> final_node;  // indexed by ReportId
  std::int64_t steps = 0;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
};

// One step of P(t+1) = M^T P(t) with M = A B^{-1}, generic over the scalar
// so exact rational arithmetic can be used in tests.
template <typename Scalar>
std::vector<Scalar> WalkStep(const Graph& graph,
                             const std::vector<Scalar>& current) {
  std::vector<Scalar> next(current.size(), Scalar(0));
  for (NodeId i = 0; i < graph.node_count(); ++i) {
    if (current[i] == Scalar(0)) continue;
    const Scalar share = current[i] / Scalar(graph.degree(i));
    for (NodeId j : graph.neighbors(i)) next[j] += share;
  }
  return next;
}

template <typename Scalar>
std::vector<Scalar> EvolveAs(const Graph& graph, std::vector<Scalar> start,
                             std::int64_t steps) {
  for (std::int64_t t = 0; t < steps; ++t) start = WalkStep(graph, start);
  return start;
}

// (M^T)^t p0 by t sparse applications. Fails when p0 does not match the
// graph or a node with positive mass has no neighbours.
absl::StatusOr<PositionDistribution> EvolveDistribution(
    const Graph& graph, const PositionDistribution& start, std::int64_t steps);

// Walk distribution after `steps` from a single node of a regular graph.
// In the symmetric scenario this one distribution stands for every user.
// Only regularity is checked: the stand-in is exact for vertex-transitive
// graphs and approximate for random regular ones.
absl::StatusOr<PositionDistribution> ExactSymmetricDistribution(
    const Graph& graph, std::int64_t steps, NodeId start = 0);

// max_i P_i / min_{i : P_i > 0} P_i.
absl::StatusOr<double> RhoStar(const PositionDistribution& p);

// Moves each of the n reports (report j starts at node j) to a uniformly
// random neighbour, `steps` times. Reports move independently, which is
// exactly the relay rule in which every held report is forwarded to its
// own freshly sampled neighbour. Stream (seed, trial) drives the draws.
WalkTrace SimulateWalk(const Graph& graph, std::int64_t steps,
                       std::uint64_t seed, std::uint64_t trial);

ReportAllocation AllocationFromTrace(const WalkTrace& trace,
                                     std::int64_t node_count);

// Runs `trials` independent walks in parallel batches and hands each trace
// to `visit` in trial order on the calling thread.
absl::Status ForEachTrace(
    const Graph& graph, std::int64_t steps, std::int64_t trials,
    std::uint64_t seed,
    const std::function<void(const WalkTrace&)>& visit, int threads = 0);

absl::StatusOr<std::vector<ReportAllocation>> SimulateAllocations(
    const Graph& graph, std::int64_t steps, std::int64_t trials,
    std::uint64_t seed, int threads = 0);

// With probability at least 1 - delta,
//   ||L||_2 <= sqrt((n^2 - n) * sum_i P_i^2) + sqrt(n * log(1/delta)).
double AllocationL2Bound(std::int64_t node_count, double sum_p_squared,
                         double delta);

// Final-round choice of the single-report protocol: a node holding reports
// submits one of them uniformly at random; an empty node submits a dummy
// (std::nullopt). Always returns one entry per node.
absl::StatusOr<std::vector<std::optional<ReportId>>> SampleSingleReports(
    const ReportAllocation& allocation, const WalkTrace& trace,
    std::uint64_t seed);

// Expected number of nodes holding no report when `reports` reports land
// independently according to p: sum_i (1 - p_i)^reports.
double ExpectedEmptyHolders(const PositionDistribution& p,
                            std::int64_t reports);

}  // namespace netshuffle

#endif  // NETSHUFFLE_WALK_H_
