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

#ifndef NETSHUFFLE_ACCOUNTANT_H_
#define NETSHUFFLE_ACCOUNTANT_H_

// Central (epsilon, delta) guarantees for network shuffling.
//
// A report randomized by an epsilon0-LDP randomizer is relayed along a
// random walk before reaching the server, which can only link it to the
// last relaying user. The closed forms below turn the walk's collision
// statistic sum_i P_i^2 (and, for exactly tracked regular graphs, the
// spread ratio rho*) into a central guarantee. Every quantity here is a pure
// function of its inputs; callers decide where sum_i P_i^2 comes from
// (stationary bound or exact walk distribution).
//
// For orientation (epsilon0 > 1, polylog factors dropped): the "all"
// protocol amplifies to O(e^{1.5 epsilon0} / sqrt(n)). Uniform subsampling
// gives O(e^{epsilon0} / sqrt(n)); a trusted uniform shuffler gives
// O(e^{3 epsilon0} / sqrt(n)), or O(e^{0.5 epsilon0} / sqrt(n)) with the
// clone-based analysis. Those other mechanisms are not implemented here.

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "netshuffle/walk.h"

namespace netshuffle {

enum class Protocol { kAll, kSingle };
enum class Distribution { kStationary, kSymmetric };
enum class PrivacyKind { kPure, kApproximate };

std::string ToString(Protocol protocol);
std::string ToString(Distribution distribution);
std::string ToString(PrivacyKind kind);
absl::StatusOr<Protocol> ParseProtocol(const std::string& text);
absl::StatusOr<Distribution> ParseDistribution(const std::string& text);

struct LocalPrivacyParams {
  double epsilon0 = 0.0;
  // Zero selects the pure-DP path.
  double delta0 = 0.0;

  absl::Status Validate() const;
};

// Leading factor of epsilon1 in the "all" protocol. The default bound uses
// (1 - 1/n) * sum P^2; the fixed-report-size derivation carries
// (n - 1) * sum P^2 instead. The two disagree, so the second is opt-in.
enum class Epsilon1Scaling { kOneMinusInverseN, kNMinusOne };

struct AmplificationInputs {
  std::int64_t node_count = 0;
  // sum_i P_i^2 in [1/n, 1].
  double sum_p_squared = 0.0;
  // Largest over smallest non-zero P_i; used by the symmetric "all" path.
  double rho_star = 1.0;
  double delta = 0.0;
  // Required whenever delta0 > 0.
  std::optional<double> delta1;
  double delta2 = 0.0;
  Epsilon1Scaling epsilon1_scaling = Epsilon1Scaling::kOneMinusInverseN;
};

struct Scenario {
  Protocol protocol = Protocol::kAll;
  Distribution distribution = Distribution::kStationary;
  PrivacyKind kind = PrivacyKind::kPure;

  // e.g. "all/stationary/pure".
  std::string ToString() const;
};

struct AmplificationResult {
  double epsilon = 0.0;
  // Total central delta: delta + delta2 on the pure "all" paths, delta on
  // the pure "single" paths, and delta + delta2 + n (e^eps + 1) delta1 on
  // approximate paths.
  double delta = 0.0;
  // Intermediate epsilon1 of the "all" protocol.
  std::optional<double> epsilon1;
  Scenario scenario;
  LocalPrivacyParams local;
  AmplificationInputs inputs;
};

// Heterogeneous advanced composition of epsilon_i-DP mechanisms:
//   sum_i (e^{eps_i} - 1) eps_i / (e^{eps_i} + 1)
//     + sqrt(2 log(1/delta) sum_i eps_i^2).
absl::StatusOr<double> ComposeHeterogeneous(std::span<const double> epsilons,
                                            double delta);

// Largest delta0 for which an (epsilon0, delta0) randomizer is within total
// variation delta1 of an 8 epsilon0-DP one:
//   (1 - e^{-eps0}) delta1 /
//     (4 e^{eps0} (2 + ln(2/delta1) / ln(1 / (1 - e^{-5 eps0})))).
absl::StatusOr<double> Delta0Threshold(double epsilon0, double delta1);

// "All" protocol, stationary scenario:
//   eps1 = sqrt((1 - 1/n) sum P^2) + sqrt(log(1/delta2) / n)
//   eps  = c^2 eps1^2 / 2 + eps1 sqrt(2 c^2 log(1/delta)),
//   c = (e^{eps0} - 1) e^{2 eps0},
// with eps0 replaced by 8 eps0 on the approximate path.
absl::StatusOr<AmplificationResult> AmplifyAllStationary(
    const LocalPrivacyParams& local, const AmplificationInputs& inputs);

// "All" protocol, symmetric scenario: as above with
// eps1 = sqrt((1 - 1/n) rho*^2 sum P^2) + sqrt(log(1/delta2) / n).
// With rho* = 1 the result is bitwise identical to the stationary path.
absl::StatusOr<AmplificationResult> AmplifyAllSymmetric(
    const LocalPrivacyParams& local, const AmplificationInputs& inputs);

// "Single" protocol (either scenario; only the source of sum P^2 differs):
//   eps = e^{2 eps0} (e^{eps0} - 1)^2 / 2 * sum P^2
//         + e^{eps0} (e^{eps0} - 1) sqrt(2 log(1/delta) sum P^2),
// with eps0 replaced by 8 eps0 on the approximate path.
absl::StatusOr<AmplificationResult> AmplifySingle(
    const LocalPrivacyParams& local, const AmplificationInputs& inputs,
    Distribution distribution = Distribution::kStationary);

// Dispatches on protocol and distribution.
absl::StatusOr<AmplificationResult> Amplify(Protocol protocol,
                                            Distribution distribution,
                                            const LocalPrivacyParams& local,
                                            const AmplificationInputs& inputs);

// Closed form quoted for the approximate single protocol when eps0 <= 1:
//   800 eps0^2 sum P^2 + 40 eps0 sqrt(2 log(1/delta) sum P^2).
// It dominates the pure-path value at eps0 but NOT the 8 eps0 expression.
absl::StatusOr<double> SingleProtocolSmallEpsilonForm(double epsilon0,
                                                      double sum_p_squared,
                                                      double delta);

// Accountant conditioned on a realized allocation l: node i is
// eps_i-DP with eps_i = log(1 + e^{2 eps0} (e^{eps0} - 1) l_i / n), and the
// per-node guarantees are composed heterogeneously.
absl::StatusOr<double> EpsilonFromAllocation(const ReportAllocation& allocation,
                                             double epsilon0, double delta);

}  // namespace netshuffle

#endif  // NETSHUFFLE_ACCOUNTANT_H_
