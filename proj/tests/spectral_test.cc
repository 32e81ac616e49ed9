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

#include "netshuffle/spectral.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "Eigen/Dense"

#include "netshuffle/graph.h"
#include "support/graph_corpus.h"
#include "support/status_testing.h"

namespace netshuffle {
namespace {

TEST(SpectralSummaryTest, Triangle) {
  ASSERT_OK_AND_ASSIGN(const auto s, ComputeSpectralSummary(CompleteGraph(3)));
  EXPECT_NEAR(s.alpha2, -0.5, 1e-9);
  EXPECT_NEAR(s.alpha_n, -0.5, 1e-9);
  EXPECT_NEAR(s.gap, 0.5, 1e-9);
}

TEST(SpectralSummaryTest, CompleteGraphK4) {
  ASSERT_OK_AND_ASSIGN(const auto s, ComputeSpectralSummary(CompleteGraph(4)));
  EXPECT_NEAR(s.alpha2, -1.0 / 3.0, 1e-9);
  EXPECT_NEAR(s.alpha_n, -1.0 / 3.0, 1e-9);
  EXPECT_NEAR(s.gap, 2.0 / 3.0, 1e-9);
}

TEST(SpectralSummaryTest, CompleteGraphGapFormula) {
  for (int n : {5, 10, 50}) {
    ASSERT_OK_AND_ASSIGN(const auto s,
                         ComputeSpectralSummary(CompleteGraph(n)));
    EXPECT_NEAR(s.gap, 1.0 - 1.0 / (n - 1), 1e-8) << "n=" << n;
  }
}

TEST(SpectralSummaryTest, BipartiteHasZeroGap) {
  for (const Graph& g : {StarGraph(3), CycleGraph(4), CycleGraph(10),
                         testing::CompleteBipartiteGraph(3, 5)}) {
    ASSERT_OK_AND_ASSIGN(const auto s, ComputeSpectralSummary(g));
    EXPECT_EQ(s.alpha_n, -1.0);
    EXPECT_EQ(s.gap, 0.0);
    EXPECT_FALSE(s.mixing_time.has_value());
  }
}

TEST(SpectralSummaryTest, DisconnectedIsRejected) {
  const auto g = Graph::FromEdges(
      4, std::vector<std::pair<NodeId, NodeId>>{{0, 1}, {2, 3}});
  ASSERT_OK(g);
  EXPECT_EQ(ComputeSpectralSummary(*g).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(SpectralSummaryTest, IterationCapReportsResidual) {
  SpectralOptions options;
  options.max_matvecs = 3;
  options.tolerance = 1e-14;
  const auto s = ComputeSpectralSummary(
      testing::PreferentialAttachmentGraph(500, 2, 3), options);
  EXPECT_EQ(s.status().code(), absl::StatusCode::kDeadlineExceeded);
  EXPECT_NE(s.status().message().find("residual"), std::string::npos);
}

TEST(SpectralSummaryTest, MatchesDenseOracleOnSmallGraphs) {
  const auto corpus = testing::SmallGraphCorpus(240, 8, 11);
  ASSERT_GE(corpus.size(), 200u);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Graph& g = corpus[i];
    const std::vector<double> dense = testing::DenseSpectrum(g);
    ASSERT_OK_AND_ASSIGN(const auto s, ComputeSpectralSummary(g));
    EXPECT_NEAR(s.alpha2, dense[1], 1e-6) << "graph " << i;
    EXPECT_NEAR(s.alpha_n, dense.back(), 1e-6) << "graph " << i;
  }
}

TEST(SpectralSummaryTest, MatchesDenseOracleOnMediumGraphs) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Graph g = testing::PreferentialAttachmentGraph(300, 2, seed);
    const std::vector<double> dense = testing::DenseSpectrum(g);
    ASSERT_OK_AND_ASSIGN(const auto s, ComputeSpectralSummary(g));
    EXPECT_NEAR(s.alpha2, dense[1], 1e-6);
    EXPECT_NEAR(s.alpha_n, dense.back(), 1e-6);
  }
}

// For a k-regular graph M = A / k, so the spectrum of A / k is the oracle.
TEST(SpectralSummaryTest, RegularGraphMatchesScaledAdjacency) {
  ASSERT_OK_AND_ASSIGN(const Graph g, RandomRegularGraph(200, 6, 5));
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(200, 200);
  for (NodeId i = 0; i < 200; ++i) {
    for (NodeId j : g.neighbors(i)) a(i, j) = 1.0 / 6.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  const auto& values = solver.eigenvalues();  // ascending
  ASSERT_OK_AND_ASSIGN(const auto s, ComputeSpectralSummary(g));
  EXPECT_NEAR(values(199), 1.0, 1e-12);
  EXPECT_NEAR(s.alpha2, values(198), 1e-6);
  EXPECT_NEAR(s.alpha_n, values(0), 1e-6);
}

TEST(SpectralSummaryTest, MixingTimeRoundsToNearest) {
  EXPECT_EQ(MixingTime(100, 0.5), std::llround(std::log(100.0) / 0.5));
  EXPECT_EQ(MixingTime(10000, 0.01), 921);
  EXPECT_FALSE(MixingTime(10, 0.0).has_value());
  for (int n = 3; n < 50; ++n) EXPECT_GE(*MixingTime(n, 1.0), 1);
}

TEST(TvUpperBoundTest, Examples) {
  EXPECT_EQ(TvUpperBound(100, 1.0, 1), 0.0);
  EXPECT_EQ(TvUpperBound(100, 1.0, 7), 0.0);
  EXPECT_EQ(TvUpperBound(100, 0.3, 0), 2.0);
  EXPECT_EQ(TvUpperBound(3, 0.3, 0), std::sqrt(3.0));
  const double t = std::log(1e4) / 0.01;
  EXPECT_NEAR(TvUpperBound(10000, 0.01, std::llround(t)), 0.01, 5e-4);
}

TEST(SumPSquaredBoundTest, Examples) {
  EXPECT_DOUBLE_EQ(SumPSquaredBound(0.01, 0.5, 0), 1.01);
  EXPECT_NEAR(SumPSquaredBound(0.01, 0.5, 10), 0.01 + std::pow(0.5, 20),
              1e-15);
  EXPECT_NEAR(SumPSquaredBound(0.01, 0.5, 10), 0.01000095, 1e-8);
  EXPECT_EQ(SumPSquaredBound(0.01, 0.5, 5000), 0.01);
}

TEST(SumPSquaredBoundTest, MonotoneAndAboveFloor) {
  const Graph g = testing::PreferentialAttachmentGraph(100, 2, 1);
  ASSERT_OK_AND_ASSIGN(const auto pi, StationaryDistribution(g));
  ASSERT_OK_AND_ASSIGN(const auto s, ComputeSpectralSummary(g));
  double previous = 2.0;
  for (std::int64_t t = 0; t < 400; ++t) {
    const double bound = SumPSquaredBound(pi, s.gap, t);
    EXPECT_LE(bound, previous);
    EXPECT_GE(bound, pi.SumOfSquares());
    EXPECT_GE(bound, 1.0 / 100);
    previous = bound;
  }
}

}  // namespace
}  // namespace netshuffle
