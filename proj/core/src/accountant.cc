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

#include "netshuffle/accountant.h"

#include <cmath>
#include <vector>

#include "absl/strings/str_cat.h"
#include "netshuffle/status_macros.h"

namespace netshuffle {
namespace {

bool InOpenUnitInterval(double x) { return x > 0.0 && x < 1.0; }

absl::Status ValidateInputs(const AmplificationInputs& in) {
  if (in.node_count < 1) {
    return absl::InvalidArgumentError("node_count must be positive");
  }
  const double floor = 1.0 / static_cast<double>(in.node_count);
  // Relative slack for sums computed in floating point.
  constexpr double kSlack = 1e-12;
  if (!(in.sum_p_squared >= floor * (1.0 - kSlack) &&
        in.sum_p_squared <= 1.0 + kSlack)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sum_p_squared ", in.sum_p_squared, " outside [1/n, 1]"));
  }
  if (!InOpenUnitInterval(in.delta)) {
    return absl::InvalidArgumentError("delta must lie in (0, 1)");
  }
  if (!(in.rho_star >= 1.0) || !std::isfinite(in.rho_star)) {
    return absl::InvalidArgumentError("rho_star must be finite and >= 1");
  }
  return absl::OkStatus();
}

// Picks the pure or approximate path. Returns the effective local epsilon.
absl::StatusOr<double> EffectiveEpsilon0(const LocalPrivacyParams& local,
                                         const AmplificationInputs& in,
                                         PrivacyKind& kind) {
  NETSHUFFLE_RETURN_IF_ERROR(local.Validate());
  if (local.delta0 == 0.0) {
    kind = PrivacyKind::kPure;
    return local.epsilon0;
  }
  kind = PrivacyKind::kApproximate;
  if (!in.delta1.has_value()) {
    return absl::InvalidArgumentError("delta1 is required when delta0 > 0");
  }
  NETSHUFFLE_ASSIGN_OR_RETURN(const double threshold,
                              Delta0Threshold(local.epsilon0, *in.delta1));
  if (local.delta0 > threshold) {
    return absl::InvalidArgumentError(absl::StrCat(
        "delta0 too large for the 8*epsilon0 pure-DP reduction: ",
        local.delta0, " > ", threshold));
  }
  return 8.0 * local.epsilon0;
}

double AllEpsilon1(const AmplificationInputs& in, double rho_star) {
  const auto n = static_cast<double>(in.node_count);
  const double factor = in.epsilon1_scaling == Epsilon1Scaling::kNMinusOne
                            ? n - 1.0
                            : 1.0 - 1.0 / n;
  return std::sqrt(factor * (rho_star * rho_star * in.sum_p_squared)) +
         std::sqrt(-std::log(in.delta2) / n);
}

double AllEpsilon(double epsilon0, double epsilon1, double delta) {
  const double spread = std::expm1(epsilon0);
  const double c2 = spread * spread * std::exp(4.0 * epsilon0);
  return c2 * epsilon1 * epsilon1 / 2.0 +
         epsilon1 * std::sqrt(2.0 * c2 * -std::log(delta));
}

double SingleEpsilon(double epsilon0, double sum_p_squared, double delta) {
  const double spread = std::expm1(epsilon0);
  return std::exp(2.0 * epsilon0) * spread * spread / 2.0 * sum_p_squared +
         std::exp(epsilon0) * spread *
             std::sqrt(2.0 * -std::log(delta) * sum_p_squared);
}

absl::Status Finish(AmplificationResult& result) {
  const AmplificationInputs& in = result.inputs;
  if (result.scenario.kind == PrivacyKind::kApproximate) {
    result.delta = in.delta + in.delta2 +
                   static_cast<double>(in.node_count) *
                       (std::exp(result.epsilon) + 1.0) * *in.delta1;
  }
  if (!std::isfinite(result.epsilon)) {
    return absl::OutOfRangeError(
        absl::StrCat(result.scenario.ToString(),
                     ": epsilon overflows for epsilon0 = ",
                     result.local.epsilon0));
  }
  if (!(result.delta < 1.0)) {
    return absl::OutOfRangeError(absl::StrCat(
        result.scenario.ToString(), ": total delta ", result.delta,
        " >= 1, the guarantee is vacuous"));
  }
  return absl::OkStatus();
}

absl::StatusOr<AmplificationResult> AmplifyAll(
    const LocalPrivacyParams& local, const AmplificationInputs& in,
    Distribution distribution, double rho_star) {
  NETSHUFFLE_RETURN_IF_ERROR(ValidateInputs(in));
  if (!InOpenUnitInterval(in.delta2)) {
    return absl::InvalidArgumentError("delta2 must lie in (0, 1)");
  }
  AmplificationResult result;
  result.local = local;
  result.inputs = in;
  result.scenario.protocol = Protocol::kAll;
  result.scenario.distribution = distribution;
  NETSHUFFLE_ASSIGN_OR_RETURN(const double epsilon0,
                              EffectiveEpsilon0(local, in, result.scenario.kind));
  const double epsilon1 = AllEpsilon1(in, rho_star);
  result.epsilon1 = epsilon1;
  result.epsilon = AllEpsilon(epsilon0, epsilon1, in.delta);
  result.delta = in.delta + in.delta2;
  NETSHUFFLE_RETURN_IF_ERROR(Finish(result));
  return result;
}

}  // namespace

std::string ToString(Protocol protocol) {
  return protocol == Protocol::kAll ? "all" : "single";
}

std::string ToString(Distribution distribution) {
  return distribution == Distribution::kStationary ? "stationary" : "symmetric";
}

std::string ToString(PrivacyKind kind) {
  return kind == PrivacyKind::kPure ? "pure" : "approximate";
}

absl::StatusOr<Protocol> ParseProtocol(const std::string& text) {
  if (text == "all") return Protocol::kAll;
  if (text == "single") return Protocol::kSingle;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown protocol \"", text, "\" (want all|single)"));
}

absl::StatusOr<Distribution> ParseDistribution(const std::string& text) {
  if (text == "stationary") return Distribution::kStationary;
  if (text == "symmetric") return Distribution::kSymmetric;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown scenario \"", text, "\" (want stationary|symmetric)"));
}

std::string Scenario::ToString() const {
  return absl::StrCat(netshuffle::ToString(protocol), "/",
                      netshuffle::ToString(distribution), "/",
                      netshuffle::ToString(kind));
}

absl::Status LocalPrivacyParams::Validate() const {
  if (!(epsilon0 >= 0.0) || !std::isfinite(epsilon0)) {
    return absl::InvalidArgumentError("epsilon0 must be finite and >= 0");
  }
  if (!(delta0 >= 0.0 && delta0 < 1.0)) {
    return absl::InvalidArgumentError("delta0 must lie in [0, 1)");
  }
  return absl::OkStatus();
}

absl::StatusOr<double> ComposeHeterogeneous(std::span<const double> epsilons,
                                            double delta) {
  if (!InOpenUnitInterval(delta)) {
    return absl::InvalidArgumentError("delta must lie in (0, 1)");
  }
  double linear = 0.0;
  double squares = 0.0;
  for (double eps : epsilons) {
    if (!(eps >= 0.0)) {
      return absl::InvalidArgumentError("per-mechanism epsilon must be >= 0");
    }
    // (e^x - 1) / (e^x + 1) == tanh(x / 2), without overflow.
    linear += std::tanh(eps / 2.0) * eps;
    squares += eps * eps;
  }
  return linear + std::sqrt(2.0 * -std::log(delta) * squares);
}

absl::StatusOr<double> Delta0Threshold(double epsilon0, double delta1) {
  if (!(epsilon0 > 0.0) || !std::isfinite(epsilon0)) {
    return absl::InvalidArgumentError(
        "delta0 threshold is undefined unless epsilon0 > 0");
  }
  if (!InOpenUnitInterval(delta1)) {
    return absl::InvalidArgumentError("delta1 must lie in (0, 1)");
  }
  // 1 - e^{-x} = -expm1(-x); ln(1 / (1 - e^{-5 eps0})) = -log1p(-e^{-5 eps0}).
  const double retained = -std::expm1(-epsilon0);
  const double tail = -std::log1p(-std::exp(-5.0 * epsilon0));
  return retained * delta1 /
         (4.0 * std::exp(epsilon0) * (2.0 + std::log(2.0 / delta1) / tail));
}

absl::StatusOr<AmplificationResult> AmplifyAllStationary(
    const LocalPrivacyParams& local, const AmplificationInputs& inputs) {
  return AmplifyAll(local, inputs, Distribution::kStationary, 1.0);
}

absl::StatusOr<AmplificationResult> AmplifyAllSymmetric(
    const LocalPrivacyParams& local, const AmplificationInputs& inputs) {
  return AmplifyAll(local, inputs, Distribution::kSymmetric, inputs.rho_star);
}

absl::StatusOr<AmplificationResult> AmplifySingle(
    const LocalPrivacyParams& local, const AmplificationInputs& inputs,
    Distribution distribution) {
  NETSHUFFLE_RETURN_IF_ERROR(ValidateInputs(inputs));
  AmplificationResult result;
  result.local = local;
  result.inputs = inputs;
  result.scenario.protocol = Protocol::kSingle;
  result.scenario.distribution = distribution;
  NETSHUFFLE_ASSIGN_OR_RETURN(
      const double epsilon0,
      EffectiveEpsilon0(local, inputs, result.scenario.kind));
  if (result.scenario.kind == PrivacyKind::kApproximate &&
      !InOpenUnitInterval(inputs.delta2)) {
    return absl::InvalidArgumentError("delta2 must lie in (0, 1)");
  }
  result.epsilon = SingleEpsilon(epsilon0, inputs.sum_p_squared, inputs.delta);
  result.delta = inputs.delta;
  NETSHUFFLE_RETURN_IF_ERROR(Finish(result));
  return result;
}

absl::StatusOr<AmplificationResult> Amplify(Protocol protocol,
                                            Distribution distribution,
                                            const LocalPrivacyParams& local,
                                            const AmplificationInputs& inputs) {
  if (protocol == Protocol::kSingle) {
    return AmplifySingle(local, inputs, distribution);
  }
  return distribution == Distribution::kStationary
             ? AmplifyAllStationary(local, inputs)
             : AmplifyAllSymmetric(local, inputs);
}

absl::StatusOr<double> SingleProtocolSmallEpsilonForm(double epsilon0,
                                                      double sum_p_squared,
                                                      double delta) {
  if (!(epsilon0 >= 0.0 && epsilon0 <= 1.0)) {
    return absl::InvalidArgumentError("closed form requires epsilon0 <= 1");
  }
  if (!InOpenUnitInterval(delta)) {
    return absl::InvalidArgumentError("delta must lie in (0, 1)");
  }
  if (!(sum_p_squared > 0.0 && sum_p_squared <= 1.0)) {
    return absl::InvalidArgumentError("sum_p_squared must lie in (0, 1]");
  }
  return 800.0 * epsilon0 * epsilon0 * sum_p_squared +
         40.0 * epsilon0 * std::sqrt(2.0 * -std::log(delta) * sum_p_squared);
}

absl::StatusOr<double> EpsilonFromAllocation(const ReportAllocation& allocation,
                                             double epsilon0, double delta) {
  if (!(epsilon0 >= 0.0) || !std::isfinite(epsilon0)) {
    return absl::InvalidArgumentError("epsilon0 must be finite and >= 0");
  }
  const std::int64_t n = static_cast<std::int64_t>(allocation.counts.size());
  if (n == 0 || allocation.total() != n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "allocation must place exactly n = ", n, " reports, got ",
        allocation.total()));
  }
  const double scale =
      std::exp(2.0 * epsilon0) * std::expm1(epsilon0) / static_cast<double>(n);
  std::vector<double> per_node;
  per_node.reserve(n);
  for (std::int64_t load : allocation.counts) {
    per_node.push_back(std::log1p(scale * static_cast<double>(load)));
  }
  return ComposeHeterogeneous(per_node, delta);
}

}  // namespace netshuffle
