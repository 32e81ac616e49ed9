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
#include "netshuffle/spectral.h"

namespace netshuffle {
namespace {

void BM_SpectralSummaryRegular(benchmark::State& state) {
  const Graph g = *RandomRegularGraph(state.range(0), 8, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComputeSpectralSummary(g));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SpectralSummaryRegular)
    ->RangeMultiplier(4)
    ->Range(1 << 10, 1 << 16)
    ->Unit(benchmark::kMillisecond);

void BM_StationaryDistribution(benchmark::State& state) {
  const Graph g = *RandomRegularGraph(state.range(0), 8, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(StationaryDistribution(g));
  }
}
BENCHMARK(BM_StationaryDistribution)->Range(1 << 10, 1 << 16);

}  // namespace
}  // namespace netshuffle
