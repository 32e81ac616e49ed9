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

#include <benchmark/benchmark.h>

#include "netshuffle/graph.h"
#include "netshuffle/walk.h"

namespace netshuffle {
namespace {

void BM_SimulateWalk(benchmark::State& state) {
  const Graph g = *RandomRegularGraph(state.range(0), 8, 3);
  std::uint64_t trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(SimulateWalk(g, 20, 1, trial++));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 20);
}
BENCHMARK(BM_SimulateWalk)->Range(1 << 10, 1 << 16);

void BM_EvolveDistribution(benchmark::State& state) {
  const Graph g = *RandomRegularGraph(state.range(0), 8, 4);
  const auto start = PositionDistribution::Delta(g.node_count(), 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(EvolveDistribution(g, start, 20));
  }
}
BENCHMARK(BM_EvolveDistribution)->Range(1 << 10, 1 << 16);

}  // namespace
}  // namespace netshuffle
