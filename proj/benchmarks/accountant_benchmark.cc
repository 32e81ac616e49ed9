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

#include <vector>

#include <benchmark/benchmark.h>

#include "netshuffle/accountant.h"

namespace netshuffle {
namespace {

AmplificationInputs Inputs(std::int64_t n) {
  AmplificationInputs in;
  in.node_count = n;
  in.sum_p_squared = 5.0 / n;
  in.delta = in.delta2 = 1e-8;
  in.delta1 = 1e-12;
  in.rho_star = 1.5;
  return in;
}

void BM_AmplifyAllStationary(benchmark::State& state) {
  const AmplificationInputs in = Inputs(100000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(AmplifyAllStationary({1.0, 0.0}, in));
  }
}
BENCHMARK(BM_AmplifyAllStationary);

void BM_AmplifySingleApproximate(benchmark::State& state) {
  const AmplificationInputs in = Inputs(100000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(AmplifySingle({0.05, 1e-18}, in));
  }
}
BENCHMARK(BM_AmplifySingleApproximate);

void BM_EpsilonFromAllocation(benchmark::State& state) {
  ReportAllocation alloc;
  alloc.counts.assign(state.range(0), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(EpsilonFromAllocation(alloc, 1.0, 1e-6));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EpsilonFromAllocation)->Range(1 << 10, 1 << 20);

}  // namespace
}  // namespace netshuffle
