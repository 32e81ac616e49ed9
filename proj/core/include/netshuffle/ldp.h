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

// Local randomizers and the synthetic mean-estimation experiment.

#ifndef NETSHUFFLE_LDP_H_
#define NETSHUFFLE_LDP_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "netshuffle/accountant.h"
#include "netshuffle/graph.h"
#include "netshuffle/rng.h"

namespace netshuffle {

// k-ary randomized response: keeps the input with probability
// e^eps0 / (e^eps0 + k - 1), otherwise reports a uniformly random other
// category.
class RandomizedResponse {
 public:
  static absl::StatusOr<RandomizedResponse> Create(int categories,
                                                   double epsilon0);

  int categories() const { return categories_; }
  double epsilon0() const { return epsilon0_; }
  double keep_probability() const { return keep_; }
  // P(output = y | input = x).
  double Probability(int x, int y) const;
  // Row-stochastic k x k transition matrix.
  std::vector<std::vector<double>> TransitionMatrix() const;

  int Randomize(int value, Rng& rng) const;

 private:
  int categories_ = 2;
  double epsilon0_ = 0.0;
  double keep_ = 0.5;
};

// Unbiased eps0-LDP randomizer for unit vectors. With probability p the
// output direction is uniform on the spherical cap {v : <v, x> >= gamma},
// otherwise uniform on its complement; the direction is then divided by the
// debiasing constant m so that E[output] = x. The split of eps0 between p
// and the cap is chosen on a grid to maximize m (minimize variance).
class PrivUnit {
 public:
  static absl::StatusOr<PrivUnit> Create(int dimension, double epsilon0);

  int dimension() const { return dimension_; }
  double epsilon0() const { return epsilon0_; }
  double cap_probability() const { return p_; }
  double gamma() const { return gamma_; }
  // Every output has this L2 norm (1 / m).
  double output_norm() const { return 1.0 / scale_; }
  // log(p / (1 - p)) + log(I / (1 - I)), I the uniform mass of the cap
  // complement; equals epsilon0 up to rounding.
  double realized_epsilon() const { return realized_epsilon_; }

  // x must have unit norm within 1e-9.
  absl::StatusOr<std::vector<double>> Randomize(std::span<const double> x,
                                                Rng& rng) const;

 private:
  int dimension_ = 1;
  double epsilon0_ = 0.0;
  double p_ = 0.5;
  double gamma_ = 0.0;
  // Beta(a, a) CDF at (1 + gamma) / 2, a = (d - 1) / 2.
  double cap_cdf_ = 0.5;
  double scale_ = 1.0;
  double realized_epsilon_ = 0.0;
};

struct MeanEstimationConfig {
  int dimension = 200;
  double epsilon0 = 1.0;
  Protocol protocol = Protocol::kAll;
  std::int64_t steps = 0;
  std::uint64_t seed = 0;
};

struct MeanEstimationOutcome {
  // Total squared L2 error against the mean of the genuine samples.
  double squared_error = 0.0;
  // Nodes that held no report at submission (single protocol only).
  std::int64_t dummies = 0;
};

// Synthetic data: the first n/2 users draw z ~ N(1, 1)^d and the rest
// N(10, 1)^d; each x = z / |z|. Dummies use a normalized N(5, 1)^d draw.
// Reports walk `steps` rounds on `graph`; "all" averages every randomized
// report, "single" averages one report (or a dummy) per node over n.
absl::StatusOr<MeanEstimationOutcome> RunMeanEstimation(
    const Graph& graph, const MeanEstimationConfig& config);

}  // namespace netshuffle

#endif  // NETSHUFFLE_LDP_H_
