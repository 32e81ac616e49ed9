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

#ifndef NETSHUFFLE_SPECTRAL_H_
#define NETSHUFFLE_SPECTRAL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "netshuffle/graph.h"

namespace netshuffle {

// Symmetric normalized adjacency S = B^{-1/2} A B^{-1/2}. S is similar to
// the transition matrix M = A B^{-1}, so both share eigenvalues
// 1 = a_1 >= a_2 >= ... >= a_n >= -1.
class NormalizedAdjacency {
 public:
  explicit NormalizedAdjacency(const Graph& graph);

  std::int64_t size() const {
    return static_cast<std::int64_t>(inv_sqrt_degree_.size());
  }

  // out = S * in.
  void Apply(std::span<const double> in, std::span<double> out) const;

  // Unit eigenvector for eigenvalue 1 of a connected graph:
  // sqrt(k_i / 2m).
  const std::vector<double>& top_eigenvector() const { return top_; }

 private:
  const Graph* graph_;
  std::vector<double> inv_sqrt_degree_;
  std::vector<double> top_;
  mutable std::vector<double> scratch_;
};

struct SpectralOptions {
  // Convergence when the Ritz residual norm drops below tolerance * ||S||
  // (||S|| = 1).
  double tolerance = 1e-8;
  int max_matvecs = 10000;
  // Krylov basis size between thick restarts.
  int basis_size = 32;
  std::uint64_t seed = 0x5eed;
};

struct SpectralSummary {
  double alpha2 = 0.0;
  double alpha_n = 0.0;
  // min(1 - alpha2, 1 - |alpha_n|); zero for bipartite graphs.
  double gap = 0.0;
  // round(log(n) / gap); empty when gap == 0.
  std::optional<std::int64_t> mixing_time;
  double alpha2_residual = 0.0;
  double alpha_n_residual = 0.0;
  int matvecs = 0;
};

// Second-largest and smallest eigenvalues of S by thick-restart Lanczos on
// the complement of the known top eigenvector. The smallest eigenvalue is
// found as the largest of -S. Fails on disconnected graphs and reports the
// last residual when the matvec budget runs out.
absl::StatusOr<SpectralSummary> ComputeSpectralSummary(
    const Graph& graph, const SpectralOptions& options = {});

double SpectralGap(double alpha2, double alpha_n);

// round(log(n) / gap), or empty when gap <= 0.
std::optional<std::int64_t> MixingTime(std::int64_t node_count, double gap);

// Bound on the L1 distance of P(t) from stationarity: sqrt(n) (1-gap)^t,
// clamped to [0, 2].
double TvUpperBound(std::int64_t node_count, double gap, std::int64_t steps);

// Worst-case sum_i P_i(t)^2: sum_i pi_i^2 + (1-gap)^(2t).
double SumPSquaredBound(double sum_pi_squared, double gap, std::int64_t steps);
double SumPSquaredBound(const PositionDistribution& stationary, double gap,
                        std::int64_t steps);

}  // namespace netshuffle

#endif  // NETSHUFFLE_SPECTRAL_H_
