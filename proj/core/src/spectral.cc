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
#include <random>

#include "Eigen/Dense"
#include "absl/strings/str_cat.h"
#include "netshuffle/rng.h"

namespace netshuffle {
namespace {

struct ExtremeEigenvalue {
  double value = 0.0;
  double residual = 0.0;
  bool converged = false;
};

// Largest eigenvalue of sign * S restricted to the orthogonal complement of
// S's top eigenvector, by thick-restart Lanczos with full
// reorthogonalization.
ExtremeEigenvalue LargestDeflated(const NormalizedAdjacency& op, double sign,
                                  const SpectralOptions& options,
                                  std::uint64_t stream, int& matvecs) {
  const Eigen::Index n = op.size();
  const Eigen::Map<const Eigen::VectorXd> top(op.top_eigenvector().data(), n);
  // The deflated operator acts on an (n-1)-dimensional space.
  const Eigen::Index m =
      std::max<Eigen::Index>(1, std::min<Eigen::Index>(options.basis_size, n - 1));
  const Eigen::Index keep = std::max<Eigen::Index>(1, m / 2);

  Eigen::MatrixXd basis(n, m + 1);
  Eigen::MatrixXd projected = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd w(n);

  auto deflate = [&top](Eigen::Ref<Eigen::VectorXd> v) { v -= top.dot(v) * top; };

  Rng rng = MakeStream(options.seed, stream);
  std::normal_distribution<double> normal;
  Eigen::VectorXd start(n);
  for (Eigen::Index i = 0; i < n; ++i) start[i] = normal(rng);
  deflate(start);
  basis.col(0) = start.normalized();

  ExtremeEigenvalue result;
  Eigen::Index locked = 0;
  while (true) {
    Eigen::Index size = m;
    double beta = 0.0;
    for (Eigen::Index j = locked; j < m; ++j) {
      op.Apply({basis.col(j).data(), static_cast<std::size_t>(n)},
               {w.data(), static_cast<std::size_t>(n)});
      ++matvecs;
      w *= sign;
      // Classical Gram-Schmidt, applied twice.
      Eigen::VectorXd h = basis.leftCols(j + 1).transpose() * w;
      w.noalias() -= basis.leftCols(j + 1) * h;
      const Eigen::VectorXd h2 = basis.leftCols(j + 1).transpose() * w;
      w.noalias() -= basis.leftCols(j + 1) * h2;
      h += h2;
      deflate(w);
      projected.col(j).head(j + 1) = h;
      projected.row(j).head(j + 1) = h.transpose();
      beta = w.norm();
      if (beta < 1e-12) {
        size = j + 1;
        beta = 0.0;
        break;
      }
      basis.col(j + 1) = w / beta;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        projected.topLeftCorner(size, size));
    const Eigen::VectorXd& theta = eig.eigenvalues();  // ascending
    const Eigen::MatrixXd& y = eig.eigenvectors();
    result.value = theta[size - 1];
    result.residual = std::abs(beta * y(size - 1, size - 1));
    if (result.residual <= options.tolerance) {
      result.converged = true;
      return result;
    }
    if (matvecs >= options.max_matvecs) return result;

    // Thick restart: keep the largest Ritz pairs and the residual direction.
    const Eigen::Index kept = std::min<Eigen::Index>(keep, size - 1);
    const Eigen::MatrixXd ritz_coeffs = y.rightCols(kept);
    const Eigen::MatrixXd ritz = basis.leftCols(size) * ritz_coeffs;
    const Eigen::VectorXd residual_dir = basis.col(size);
    basis.leftCols(kept) = ritz;
    basis.col(kept) = residual_dir;
    projected.setZero();
    for (Eigen::Index i = 0; i < kept; ++i) {
      projected(i, i) = theta[size - kept + i];
      const double coupling = beta * ritz_coeffs(size - 1, i);
      projected(i, kept) = coupling;
      projected(kept, i) = coupling;
    }
    locked = kept;
  }
}

}  // namespace

NormalizedAdjacency::NormalizedAdjacency(const Graph& graph)
    : graph_(&graph),
      inv_sqrt_degree_(graph.node_count()),
      top_(graph.node_count()),
      scratch_(graph.node_count()) {
  const double two_m = 2.0 * static_cast<double>(graph.edge_count());
  for (NodeId i = 0; i < graph.node_count(); ++i) {
    const auto k = static_cast<double>(graph.degree(i));
    inv_sqrt_degree_[i] = k > 0 ? 1.0 / std::sqrt(k) : 0.0;
    top_[i] = two_m > 0 ? std::sqrt(k / two_m) : 0.0;
  }
}

void NormalizedAdjacency::Apply(std::span<const double> in,
                                std::span<double> out) const {
  const std::size_t n = inv_sqrt_degree_.size();
  for (std::size_t i = 0; i < n; ++i) scratch_[i] = in[i] * inv_sqrt_degree_[i];
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (NodeId j : graph_->neighbors(static_cast<NodeId>(i))) acc += scratch_[j];
    out[i] = acc * inv_sqrt_degree_[i];
  }
}

double SpectralGap(double alpha2, double alpha_n) {
  return std::max(0.0, std::min(1.0 - alpha2, 1.0 - std::abs(alpha_n)));
}

std::optional<std::int64_t> MixingTime(std::int64_t node_count, double gap) {
  if (!(gap > 0.0) || node_count < 1) return std::nullopt;
  return static_cast<std::int64_t>(
      std::llround(std::log(static_cast<double>(node_count)) / gap));
}

double TvUpperBound(std::int64_t node_count, double gap, std::int64_t steps) {
  const double bound = std::sqrt(static_cast<double>(node_count)) *
                       std::pow(1.0 - gap, static_cast<double>(steps));
  return std::clamp(bound, 0.0, 2.0);
}

double SumPSquaredBound(double sum_pi_squared, double gap, std::int64_t steps) {
  return sum_pi_squared + std::pow(1.0 - gap, 2.0 * static_cast<double>(steps));
}

double SumPSquaredBound(const PositionDistribution& stationary, double gap,
                        std::int64_t steps) {
  return SumPSquaredBound(stationary.SumOfSquares(), gap, steps);
}

absl::StatusOr<SpectralSummary> ComputeSpectralSummary(
    const Graph& graph, const SpectralOptions& options) {
  const ErgodicityCheck check = CheckErgodic(graph);
  if (!check.is_connected) {
    return absl::FailedPreconditionError(
        "spectral summary requires a connected graph");
  }
  if (graph.node_count() < 2) {
    return absl::FailedPreconditionError(
        "spectral summary requires at least two nodes");
  }
  const NormalizedAdjacency op(graph);
  SpectralSummary summary;
  int second_matvecs = 0;
  const ExtremeEigenvalue second =
      LargestDeflated(op, 1.0, options, /*stream=*/2, second_matvecs);
  summary.matvecs += second_matvecs;
  if (!second.converged) {
    return absl::DeadlineExceededError(absl::StrCat(
        "second eigenvalue did not converge within ", options.max_matvecs,
        " matvecs; residual ", second.residual));
  }
  summary.alpha2 = std::clamp(second.value, -1.0, 1.0);
  summary.alpha2_residual = second.residual;
  if (check.is_bipartite) {
    // The spectrum of a bipartite graph is symmetric about zero.
    summary.alpha_n = -1.0;
  } else {
    int smallest_matvecs = 0;
    const ExtremeEigenvalue smallest =
        LargestDeflated(op, -1.0, options, /*stream=*/3, smallest_matvecs);
    summary.matvecs += smallest_matvecs;
    if (!smallest.converged) {
      return absl::DeadlineExceededError(absl::StrCat(
          "smallest eigenvalue did not converge within ", options.max_matvecs,
          " matvecs; residual ", smallest.residual));
    }
    summary.alpha_n = std::clamp(-smallest.value, -1.0, 1.0);
    summary.alpha_n_residual = smallest.residual;
  }
  summary.gap = SpectralGap(summary.alpha2, summary.alpha_n);
  summary.mixing_time = MixingTime(graph.node_count(), summary.gap);
  return summary;
}

}  // namespace netshuffle
