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
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "netshuffle/graph.h"
#include "netshuffle/rng.h"
#include "support/status_testing.h"

namespace netshuffle {
namespace {

TEST(RandomizedResponseTest, RowsAreDistributions) {
  for (int k : {2, 4, 10}) {
    for (double eps0 : {0.0, 0.5, 3.0}) {
      ASSERT_OK_AND_ASSIGN(const auto rr, RandomizedResponse::Create(k, eps0));
      const auto matrix = rr.TransitionMatrix();
      ASSERT_EQ(matrix.size(), static_cast<std::size_t>(k));
      for (int x = 0; x < k; ++x) {
        EXPECT_NEAR(std::accumulate(matrix[x].begin(), matrix[x].end(), 0.0),
                    1.0, 1e-12);
        for (int y = 0; y < k; ++y) {
          EXPECT_EQ(matrix[x][y], rr.Probability(x, y));
        }
      }
    }
  }
}

TEST(RandomizedResponseTest, Limits) {
  ASSERT_OK_AND_ASSIGN(const auto flat, RandomizedResponse::Create(5, 0.0));
  EXPECT_DOUBLE_EQ(flat.keep_probability(), 0.2);
  ASSERT_OK_AND_ASSIGN(const auto sharp, RandomizedResponse::Create(5, 40.0));
  EXPECT_NEAR(sharp.keep_probability(), 1.0, 1e-15);
  ASSERT_OK_AND_ASSIGN(const auto binary,
                       RandomizedResponse::Create(2, std::log(3.0)));
  EXPECT_DOUBLE_EQ(binary.keep_probability(), 0.75);
  EXPECT_FALSE(RandomizedResponse::Create(1, 1.0).ok());
  EXPECT_FALSE(RandomizedResponse::Create(3, -1.0).ok());
}

TEST(RandomizedResponseTest, EmpiricalRatioRespectsEpsilon) {
  constexpr int kCategories = 4;
  constexpr int kSamples = 1000000;
  const double eps0 = 1.0;
  ASSERT_OK_AND_ASSIGN(const auto rr,
                       RandomizedResponse::Create(kCategories, eps0));
  std::vector<std::vector<double>> freq(kCategories,
                                        std::vector<double>(kCategories));
  for (int x = 0; x < kCategories; ++x) {
    Rng rng = MakeStream(17, x);
    for (int s = 0; s < kSamples; ++s) freq[x][rr.Randomize(x, rng)] += 1;
  }
  for (int y = 0; y < kCategories; ++y) {
    for (int x = 0; x < kCategories; ++x) {
      for (int x2 = 0; x2 < kCategories; ++x2) {
        EXPECT_LE(freq[x][y] / freq[x2][y], std::exp(eps0) * 1.02);
      }
    }
    EXPECT_NEAR(freq[y][y] / kSamples, rr.keep_probability(), 2e-3);
  }
}

class PrivUnitTest : public ::testing::TestWithParam<int> {};

TEST_P(PrivUnitTest, UnbiasedWithConstantNorm) {
  const int d = GetParam();
  const double eps0 = 2.0;
  ASSERT_OK_AND_ASSIGN(const auto unit, PrivUnit::Create(d, eps0));
  std::vector<double> x(d, 0.0);
  x[0] = 1.0;
  if (d > 1) {
    // A generic direction, not aligned with an axis.
    for (int i = 0; i < d; ++i) x[i] = 1.0 + 0.1 * i;
    const double norm = std::sqrt(std::inner_product(x.begin(), x.end(),
                                                     x.begin(), 0.0));
    for (double& v : x) v /= norm;
  }
  constexpr int kSamples = 100000;
  std::vector<double> mean(d, 0.0), second(d, 0.0);
  Rng rng = MakeStream(5, d);
  for (int s = 0; s < kSamples; ++s) {
    ASSERT_OK_AND_ASSIGN(const auto out, unit.Randomize(x, rng));
    const double norm = std::sqrt(std::inner_product(out.begin(), out.end(),
                                                     out.begin(), 0.0));
    ASSERT_NEAR(norm, unit.output_norm(), 1e-9 * unit.output_norm());
    for (int i = 0; i < d; ++i) {
      mean[i] += out[i] / kSamples;
      second[i] += out[i] * out[i] / kSamples;
    }
  }
  for (int i = 0; i < d; ++i) {
    const double se = std::sqrt((second[i] - mean[i] * mean[i]) / kSamples);
    EXPECT_NEAR(mean[i], x[i], 5 * se) << "coordinate " << i;
  }
}

TEST_P(PrivUnitTest, RealizedEpsilonMatches) {
  for (double eps0 : {0.5, 2.0, 6.0}) {
    ASSERT_OK_AND_ASSIGN(const auto unit, PrivUnit::Create(GetParam(), eps0));
    EXPECT_NEAR(unit.realized_epsilon(), eps0, 1e-9);
    EXPECT_GE(unit.gamma(), 0.0);
    EXPECT_GT(unit.output_norm(), 1.0);
  }
}

INSTANTIATE_TEST_SUITE_P(Dimensions, PrivUnitTest,
                         ::testing::Values(1, 2, 16, 200));

TEST(PrivUnitTest, UnitAxisSixteen) {
  ASSERT_OK_AND_ASSIGN(const auto unit, PrivUnit::Create(16, 2.0));
  std::vector<double> e1(16, 0.0);
  e1[0] = 1.0;
  constexpr int kSamples = 200000;
  std::vector<double> mean(16, 0.0);
  Rng rng = MakeStream(11, 0);
  for (int s = 0; s < kSamples; ++s) {
    ASSERT_OK_AND_ASSIGN(const auto out, unit.Randomize(e1, rng));
    for (int i = 0; i < 16; ++i) mean[i] += out[i] / kSamples;
  }
  for (int i = 0; i < 16; ++i) {
    EXPECT_NEAR(mean[i], e1[i], 0.02) << "coordinate " << i;
  }
}

// The cap around x is the worst-case event between x and -x, so the
// likelihood ratio there is the privacy loss itself.
TEST(PrivUnitTest, AntipodalCapRatio) {
  for (int d : {3, 16}) {
    const double eps0 = 1.5;
    ASSERT_OK_AND_ASSIGN(const auto unit, PrivUnit::Create(d, eps0));
    std::vector<double> x(d, 0.0), minus(d, 0.0);
    x[0] = 1.0;
    minus[0] = -1.0;
    constexpr int kSamples = 400000;
    double hits_x = 0, hits_minus = 0;
    Rng rng = MakeStream(23, d);
    for (int s = 0; s < kSamples; ++s) {
      const auto a = *unit.Randomize(x, rng);
      const auto b = *unit.Randomize(minus, rng);
      const double threshold = unit.gamma() * unit.output_norm();
      hits_x += a[0] >= threshold;
      hits_minus += b[0] >= threshold;
    }
    const double ratio = hits_x / hits_minus;
    EXPECT_LE(ratio, std::exp(eps0) * 1.05) << "d=" << d;
    EXPECT_GE(ratio, std::exp(eps0) * 0.95) << "d=" << d;
  }
}

TEST(PrivUnitTest, RejectsBadInputs) {
  EXPECT_FALSE(PrivUnit::Create(0, 1.0).ok());
  EXPECT_FALSE(PrivUnit::Create(4, 0.0).ok());
  ASSERT_OK_AND_ASSIGN(const auto unit, PrivUnit::Create(4, 1.0));
  Rng rng(1);
  const std::vector<double> not_unit = {1.0, 1.0, 0.0, 0.0};
  EXPECT_FALSE(unit.Randomize(not_unit, rng).ok());
  const std::vector<double> wrong_size = {1.0};
  EXPECT_FALSE(unit.Randomize(wrong_size, rng).ok());
}

MeanEstimationConfig Config(Protocol protocol, double eps0,
                            std::uint64_t seed) {
  MeanEstimationConfig config;
  config.dimension = 20;
  config.epsilon0 = eps0;
  config.protocol = protocol;
  config.steps = 6;
  config.seed = seed;
  return config;
}

TEST(MeanEstimationTest, Deterministic) {
  ASSERT_OK_AND_ASSIGN(const Graph g, RandomRegularGraph(200, 6, 1));
  for (Protocol p : {Protocol::kAll, Protocol::kSingle}) {
    ASSERT_OK_AND_ASSIGN(const auto a, RunMeanEstimation(g, Config(p, 1, 9)));
    ASSERT_OK_AND_ASSIGN(const auto b, RunMeanEstimation(g, Config(p, 1, 9)));
    EXPECT_EQ(a.squared_error, b.squared_error);
    EXPECT_EQ(a.dummies, b.dummies);
  }
}

TEST(MeanEstimationTest, ErrorFallsWithEpsilon) {
  ASSERT_OK_AND_ASSIGN(const Graph g, RandomRegularGraph(400, 6, 2));
  for (Protocol p : {Protocol::kAll, Protocol::kSingle}) {
    std::vector<double> errors;
    for (double eps0 : {0.5, 2.0, 8.0}) {
      double total = 0.0;
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        ASSERT_OK_AND_ASSIGN(const auto out,
                             RunMeanEstimation(g, Config(p, eps0, seed)));
        total += out.squared_error;
      }
      errors.push_back(total);
    }
    EXPECT_GT(errors[0], errors[1]);
    EXPECT_GT(errors[1], errors[2]);
  }
}

TEST(MeanEstimationTest, AllProtocolHasNoDummies) {
  ASSERT_OK_AND_ASSIGN(const Graph g, RandomRegularGraph(100, 4, 3));
  ASSERT_OK_AND_ASSIGN(const auto all,
                       RunMeanEstimation(g, Config(Protocol::kAll, 1, 0)));
  EXPECT_EQ(all.dummies, 0);
  ASSERT_OK_AND_ASSIGN(const auto single,
                       RunMeanEstimation(g, Config(Protocol::kSingle, 1, 0)));
  // About n / e nodes end up empty after mixing.
  EXPECT_GT(single.dummies, 20);
  EXPECT_LT(single.dummies, 55);
}

TEST(MeanEstimationTest, RejectsOddPopulation) {
  EXPECT_FALSE(
      RunMeanEstimation(CycleGraph(7), Config(Protocol::kAll, 1, 0)).ok());
}

}  // namespace
}  // namespace netshuffle
