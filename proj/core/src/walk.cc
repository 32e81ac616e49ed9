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

#include "netshuffle/walk.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "netshuffle/parallel.h"
#include "netshuffle/rng.h"

namespace netshuffle {

std::int64_t ReportAllocation::total() const {
  std::int64_t sum = 0;
  for (std::int64_t c : counts) sum += c;
  return sum;
}

double ReportAllocation::l2_norm() const {
  double sum = 0.0;
  for (std::int64_t c : counts) sum += static_cast<double>(c * c);
  return std::sqrt(sum);
}

std::int64_t ReportAllocation::max_load() const {
  return counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
}

std::int64_t ReportAllocation::empty_nodes() const {
  return std::count(counts.begin(), counts.end(), 0);
}

absl::StatusOr<PositionDistribution> EvolveDistribution(
    const Graph& graph, const PositionDistribution& start,
    std::int64_t steps) {
  if (static_cast<std::int64_t>(start.size()) != graph.node_count()) {
    return absl::InvalidArgumentError(
        absl::StrCat("distribution has ", start.size(), " entries for ",
                     graph.node_count(), " nodes"));
  }
  if (steps < 0) return absl::InvalidArgumentError("negative step count");
  for (NodeId i = 0; i < graph.node_count(); ++i) {
    if (start.probabilities[i] > 0.0 && graph.degree(i) == 0) {
      return absl::FailedPreconditionError(
          absl::StrCat("node ", i, " carries mass but has no neighbours"));
    }
  }
  PositionDistribution out;
  out.probabilities = EvolveAs(graph, start.probabilities, steps);
  out.time_step = start.time_step.value_or(0) + steps;
  return out;
}

absl::StatusOr<PositionDistribution> ExactSymmetricDistribution(
    const Graph& graph, std::int64_t steps, NodeId start) {
  if (graph.node_count() == 0 || !graph.is_regular()) {
    return absl::FailedPreconditionError(absl::StrCat(
        "symmetric scenario needs a regular graph; degrees range over [",
        graph.min_degree(), ", ", graph.max_degree(), "]"));
  }
  if (start < 0 || start >= graph.node_count()) {
    return absl::OutOfRangeError(absl::StrCat("start node ", start));
  }
  return EvolveDistribution(
      graph, PositionDistribution::Delta(graph.node_count(), start), steps);
}

absl::StatusOr<double> RhoStar(const PositionDistribution& p) {
  double largest = 0.0;
  double smallest = std::numeric_limits<double>::infinity();
  for (double v : p.probabilities) {
    if (v <= 0.0) continue;
    largest = std::max(largest, v);
    smallest = std::min(smallest, v);
  }
  if (largest == 0.0) {
    return absl::InvalidArgumentError("distribution has no positive entry");
  }
  return largest / smallest;
}

WalkTrace SimulateWalk(const Graph& graph, std::int64_t steps,
                       std::uint64_t seed, std::uint64_t trial) {
  WalkTrace trace;
  trace.steps = steps;
  trace.seed = seed;
  trace.trial = trial;
  const auto n = static_cast<NodeId>(graph.node_count());
  trace.final_node.resize(n);
  Rng rng = MakeStream(seed, trial);
  for (NodeId report = 0; report < n; ++report) {
    NodeId at = report;
    for (std::int64_t t = 0; t < steps; ++t) {
      const auto nbrs = graph.neighbors(at);
      at = nbrs[UniformIndex(rng, nbrs.size())];
    }
    trace.final_node[report] = at;
  }
  return trace;
}

ReportAllocation AllocationFromTrace(const WalkTrace& trace,
                                     std::int64_t node_count) {
  ReportAllocation allocation;
  allocation.counts.assign(node_count, 0);
  for (NodeId node : trace.final_node) ++allocation.counts[node];
  return allocation;
}

absl::Status ForEachTrace(const Graph& graph, std::int64_t steps,
                          std::int64_t trials, std::uint64_t seed,
                          const std::function<void(const WalkTrace&)>& visit,
                          int threads) {
  if (steps < 0 || trials < 0) {
    return absl::InvalidArgumentError("steps and trials must be non-negative");
  }
  if (steps > 0 && graph.min_degree() == 0) {
    return absl::FailedPreconditionError(
        "random walk needs every node to have a neighbour");
  }
  if (threads <= 0) threads = DefaultThreadCount();
  const std::int64_t batch = std::max<std::int64_t>(1, 4 * threads);
  std::vector<WalkTrace> traces(batch);
  for (std::int64_t first = 0; first < trials; first += batch) {
    const std::int64_t count = std::min(batch, trials - first);
    ParallelFor(
        static_cast<std::size_t>(count),
        [&](std::size_t begin, std::size_t end) {
          for (std::size_t i = begin; i < end; ++i) {
            traces[i] = SimulateWalk(graph, steps, seed,
                                     static_cast<std::uint64_t>(first) + i);
          }
        },
        threads);
    for (std::int64_t i = 0; i < count; ++i) visit(traces[i]);
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<ReportAllocation>> SimulateAllocations(
    const Graph& graph, std::int64_t steps, std::int64_t trials,
    std::uint64_t seed, int threads) {
  std::vector<ReportAllocation> allocations;
  allocations.reserve(std::max<std::int64_t>(trials, 0));
  const absl::Status status = ForEachTrace(
      graph, steps, trials, seed,
      [&](const WalkTrace& trace) {
        allocations.push_back(AllocationFromTrace(trace, graph.node_count()));
      },
      threads);
  if (!status.ok()) return status;
  return allocations;
}

double AllocationL2Bound(std::int64_t node_count, double sum_p_squared,
                         double delta) {
  const auto n = static_cast<double>(node_count);
  return std::sqrt((n * n - n) * sum_p_squared) +
         std::sqrt(n * std::log(1.0 / delta));
}

absl::StatusOr<std::vector<std::optional<ReportId>>> SampleSingleReports(
    const ReportAllocation& allocation, const WalkTrace& trace,
    std::uint64_t seed) {
  const auto n = static_cast<std::int64_t>(allocation.counts.size());
  if (AllocationFromTrace(trace, n).counts != allocation.counts) {
    return absl::InvalidArgumentError("allocation does not match trace");
  }
  // Reports grouped by holder, in ReportId order within each holder.
  std::vector<std::int64_t> offsets(n + 1, 0);
  for (NodeId holder : trace.final_node) ++offsets[holder + 1];
  for (std::int64_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  std::vector<ReportId> held(trace.final_node.size());
  std::vector<std::int64_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::size_t r = 0; r < trace.final_node.size(); ++r) {
    held[cursor[trace.final_node[r]]++] = static_cast<ReportId>(r);
  }
  Rng rng = MakeStream(seed, trace.trial ^ 0x73696e676c65ULL);
  std::vector<std::optional<ReportId>> chosen(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t load = allocation.counts[i];
    if (load == 0) continue;
    chosen[i] = held[offsets[i] + UniformIndex(rng, load)];
  }
  return chosen;
}

double ExpectedEmptyHolders(const PositionDistribution& p,
                            std::int64_t reports) {
  if (reports == 0) return static_cast<double>(p.size());
  double total = 0.0;
  for (double pi : p.probabilities) {
    total += std::exp(static_cast<double>(reports) * std::log1p(-pi));
  }
  return total;
}

}  // namespace netshuffle
