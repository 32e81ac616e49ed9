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

#include "netshuffle/ldp.h"

#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>

#include "absl/strings/str_cat.h"
#include "boost/math/special_functions/beta.hpp"
#include "netshuffle/parallel.h"
#include "netshuffle/status_macros.h"
#include "netshuffle/walk.h"

namespace netshuffle {
namespace {

constexpr std::uint64_t kDataStream = 1ULL << 40;
constexpr std::uint64_t kRandomizeStream = 2ULL << 40;
constexpr std::uint64_t kDummyStream = 3ULL << 40;
// Grid resolution for splitting eps0 between p and the cap.
constexpr int kSplitGrid = 256;

double Dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// Logistic e^x / (1 + e^x).
double Logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<double> NormalizedGaussian(int dimension, double mean, Rng& rng) {
  std::normal_distribution<double> normal(mean, 1.0);
  std::vector<double> z(dimension);
  for (double& v : z) v = normal(rng);
  const double norm = std::sqrt(Dot(z, z));
  for (double& v : z) v /= norm;
  return z;
}

}  // namespace

absl::StatusOr<RandomizedResponse> RandomizedResponse::Create(
    int categories, double epsilon0) {
  if (categories < 2) {
    return absl::InvalidArgumentError("randomized response needs k >= 2");
  }
  if (!(epsilon0 >= 0.0)) {
    return absl::InvalidArgumentError("epsilon0 must be >= 0");
  }
  RandomizedResponse rr;
  rr.categories_ = categories;
  rr.epsilon0_ = epsilon0;
  // e^eps / (e^eps + k - 1), written to stay finite for huge eps.
  rr.keep_ = 1.0 / (1.0 + (categories - 1) * std::exp(-epsilon0));
  return rr;
}

double RandomizedResponse::Probability(int x, int y) const {
  return x == y ? keep_ : (1.0 - keep_) / (categories_ - 1);
}

std::vector<std::vector<double>> RandomizedResponse::TransitionMatrix() const {
  std::vector<std::vector<double>> matrix(categories_,
                                          std::vector<double>(categories_));
  for (int x = 0; x < categories_; ++x) {
    for (int y = 0; y < categories_; ++y) matrix[x][y] = Probability(x, y);
  }
  return matrix;
}

int RandomizedResponse::Randomize(int value, Rng& rng) const {
  if (UniformUnit(rng) < keep_) return value;
  const int other = static_cast<int>(UniformIndex(rng, categories_ - 1));
  return other < value ? other : other + 1;
}

absl::StatusOr<PrivUnit> PrivUnit::Create(int dimension, double epsilon0) {
  if (dimension < 1) {
    return absl::InvalidArgumentError("dimension must be >= 1");
  }
  if (!(epsilon0 > 0.0) || !std::isfinite(epsilon0)) {
    return absl::InvalidArgumentError("epsilon0 must be finite and > 0");
  }
  PrivUnit unit;
  unit.dimension_ = dimension;
  unit.epsilon0_ = epsilon0;
  if (dimension == 1) {
    // Sign randomized response; the cap is the half-line through x.
    unit.p_ = Logistic(epsilon0);
    unit.gamma_ = 0.0;
    unit.scale_ = 2.0 * unit.p_ - 1.0;
    unit.realized_epsilon_ = std::log(unit.p_ / (1.0 - unit.p_));
    return unit;
  }

  const double a = (dimension - 1) / 2.0;
  // log of (d - 1) 2^(d - 2) B(a, a).
  const double log_norm = std::log(dimension - 1.0) +
                          (dimension - 2.0) * std::log(2.0) +
                          2.0 * std::lgamma(a) - std::lgamma(2.0 * a);
  double best_log_scale = -std::numeric_limits<double>::infinity();
  for (int step = 0; step <= kSplitGrid; ++step) {
    const double cap_epsilon = epsilon0 * step / kSplitGrid;
    const double p = Logistic(epsilon0 - cap_epsilon);
    const double cdf = Logistic(cap_epsilon);
    // Beta(a, a) is symmetric, so 1 - tau comes from the lower tail.
    const double tau = boost::math::ibeta_inv(a, a, cdf);
    const double one_minus_tau =
        boost::math::ibeta_inv(a, a, 1.0 - cdf);
    const double bracket = p / (1.0 - cdf) - (1.0 - p) / cdf;
    if (!(bracket > 0.0)) continue;
    const double log_scale =
        a * std::log(4.0 * tau * one_minus_tau) - log_norm + std::log(bracket);
    if (log_scale > best_log_scale) {
      best_log_scale = log_scale;
      unit.p_ = p;
      unit.gamma_ = tau - one_minus_tau;
      unit.cap_cdf_ = boost::math::ibeta(a, a, tau);
    }
  }
  if (!std::isfinite(best_log_scale)) {
    return absl::InternalError(
        absl::StrCat("no feasible cap for d = ", dimension));
  }
  unit.scale_ = std::exp(best_log_scale);
  unit.realized_epsilon_ = std::log(unit.p_ / (1.0 - unit.p_)) +
                           std::log(unit.cap_cdf_ / (1.0 - unit.cap_cdf_));
  return unit;
}

absl::StatusOr<std::vector<double>> PrivUnit::Randomize(
    std::span<const double> x, Rng& rng) const {
  if (static_cast<int>(x.size()) != dimension_) {
    return absl::InvalidArgumentError(absl::StrCat(
        "input has dimension ", x.size(), ", expected ", dimension_));
  }
  if (std::abs(Dot(x, x) - 1.0) > 1e-9) {
    return absl::InvalidArgumentError("input must be a unit vector");
  }
  const bool in_cap = UniformUnit(rng) < p_;
  std::vector<double> out(dimension_);
  if (dimension_ == 1) {
    out[0] = (in_cap ? x[0] : -x[0]) / scale_;
    return out;
  }

  // W = (1 + <v, x>) / 2 is Beta(a, a) for uniform v; invert the CDF on the
  // chosen side of the cap boundary.
  const double a = (dimension_ - 1) / 2.0;
  const double u = UniformUnit(rng);
  double w;
  if (in_cap) {
    w = boost::math::ibetac_inv(a, a, u * (1.0 - cap_cdf_));
  } else {
    w = boost::math::ibeta_inv(a, a, u * cap_cdf_);
  }
  const double t = 2.0 * w - 1.0;
  const double sine = 2.0 * std::sqrt(w * (1.0 - w));

  // Uniform unit direction orthogonal to x.
  std::normal_distribution<double> normal;
  std::vector<double> orth(dimension_);
  double norm = 0.0;
  while (norm < 1e-12) {
    for (double& v : orth) v = normal(rng);
    const double along = Dot(orth, x);
    for (int i = 0; i < dimension_; ++i) orth[i] -= along * x[i];
    norm = std::sqrt(Dot(orth, orth));
  }
  for (int i = 0; i < dimension_; ++i) {
    out[i] = (t * x[i] + sine * orth[i] / norm) / scale_;
  }
  return out;
}

absl::StatusOr<MeanEstimationOutcome> RunMeanEstimation(
    const Graph& graph, const MeanEstimationConfig& config) {
  const std::int64_t n = graph.node_count();
  if (n < 2 || n % 2 != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("mean estimation needs an even node count, got ", n));
  }
  if (config.steps < 0) {
    return absl::InvalidArgumentError("steps must be >= 0");
  }
  NETSHUFFLE_ASSIGN_OR_RETURN(const PrivUnit unit,
                              PrivUnit::Create(config.dimension,
                                               config.epsilon0));
  const int d = config.dimension;

  std::vector<std::vector<double>> samples(n);
  ParallelFor(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      Rng rng = MakeStream(config.seed, kDataStream + j);
      samples[j] = NormalizedGaussian(
          d, j < static_cast<std::size_t>(n / 2) ? 1.0 : 10.0, rng);
    }
  });
  std::vector<double> truth(d, 0.0);
  for (const auto& x : samples) {
    for (int i = 0; i < d; ++i) truth[i] += x[i];
  }
  for (double& v : truth) v /= static_cast<double>(n);

  // Slot i holds what node i contributes; which sample (or dummy) that is
  // depends on the protocol.
  std::vector<std::optional<ReportId>> source(n);
  MeanEstimationOutcome outcome;
  if (config.protocol == Protocol::kAll) {
    for (std::int64_t j = 0; j < n; ++j) source[j] = static_cast<ReportId>(j);
  } else {
    const WalkTrace trace = SimulateWalk(graph, config.steps, config.seed, 0);
    const ReportAllocation allocation = AllocationFromTrace(trace, n);
    NETSHUFFLE_ASSIGN_OR_RETURN(
        source, SampleSingleReports(allocation, trace, config.seed));
    outcome.dummies = allocation.empty_nodes();
  }

  std::vector<std::vector<double>> reports(n);
  std::vector<absl::Status> errors(n);
  ParallelFor(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      absl::StatusOr<std::vector<double>> report;
      if (source[i].has_value()) {
        // Keyed by report id so both protocols randomize a report alike.
        Rng rng = MakeStream(config.seed, kRandomizeStream + *source[i]);
        report = unit.Randomize(samples[*source[i]], rng);
      } else {
        Rng rng = MakeStream(config.seed, kDummyStream + i);
        const std::vector<double> dummy = NormalizedGaussian(d, 5.0, rng);
        report = unit.Randomize(dummy, rng);
      }
      if (report.ok()) {
        reports[i] = *std::move(report);
      } else {
        errors[i] = report.status();
      }
    }
  });
  for (const absl::Status& status : errors) NETSHUFFLE_RETURN_IF_ERROR(status);

  std::vector<double> estimate(d, 0.0);
  for (const auto& report : reports) {
    for (int i = 0; i < d; ++i) estimate[i] += report[i];
  }
  for (int i = 0; i < d; ++i) {
    const double diff = estimate[i] / static_cast<double>(n) - truth[i];
    outcome.squared_error += diff * diff;
  }
  return outcome;
}

}  // namespace netshuffle
