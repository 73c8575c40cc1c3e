#pragma once

#include "pabench/rng.hpp"
#include "pabench/types.hpp"

#include <Eigen/Core>

#include <limits>
#include <stdexcept>
#include <vector>

namespace pabench {

struct PamResult {
  Labels labels;
  std::vector<Index> medoids;  // point indices, sorted ascending
  double cost = 0.0;           // total dissimilarity to the nearest medoid
  double build_cost = 0.0;
  std::vector<double> cost_trace;  // BUILD cost, then after each accepted swap
};

/// Partitioning around medoids: greedy BUILD followed by best-improvement
/// SWAP until no swap lowers the total cost. Fully deterministic.
PamResult pam(const DistanceMatrix& D, Index k);

/// Total cost of a medoid set; points go to the nearest medoid.
double medoid_cost(const DistanceMatrix& D, const std::vector<Index>& medoids);

struct KModesResult {
  Labels labels;
  BinaryMatrix modes;  // K x m; row c is the mode of label c + 1
  Index cost = 0;      // total simple-matching mismatches to the assigned mode
  std::vector<Index> cost_trace;  // best start, after each assignment step
};

/// Huang's K-modes with simple matching distance and batch updates. Modes
/// start at K random distinct rows; a column whose members split evenly
/// gets mode 1. Best of `n_starts` by total cost.
KModesResult kmodes(const BinaryMatrix& data, Index k, Rng& rng, Index n_starts = 10);

/// Column-wise majority of the selected rows, ties to 1.
BinaryVector majority_mode(const BinaryMatrix& data, const std::vector<Index>& rows);

struct KMeansOptions {
  Index n_starts = 100;
  Index iter_max = 100;
};

template <typename Scalar>
struct KMeansResult {
  Labels labels;
  MatrixX<Scalar> centers;  // K x p
  Scalar wcss = Scalar(0);
  std::vector<Scalar> wcss_trace;  // best start, after each assignment step
  Index best_start = 0;
};

namespace detail {

/// k distinct indices from 0..n-1 by a partial Fisher-Yates shuffle.
std::vector<Index> sample_indices(Index n, Index k, Rng& rng);

template <typename DerivedX, typename Scalar>
Scalar assign_nearest(const Eigen::MatrixBase<DerivedX>& X, const MatrixX<Scalar>& centers, Labels& labels,
                      VectorX<Scalar>& dist) {
  Scalar total(0);
  for (Index i = 0; i < X.rows(); ++i) {
    Index best = 0;
    Scalar best_d = std::numeric_limits<Scalar>::infinity();
    for (Index c = 0; c < centers.rows(); ++c) {
      const Scalar d = (X.row(i) - centers.row(c)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    labels[i] = static_cast<int>(best);
    dist[i] = best_d;
    total += best_d;
  }
  return total;
}

}  // namespace detail

/// Lloyd's K-means from `n_starts` random-row starts; returns the start
/// with the smallest within-cluster sum of squares (earliest on ties).
/// An emptied cluster is reseeded at the point farthest from its center.
template <typename Derived>
KMeansResult<typename Derived::Scalar> kmeans(const Eigen::MatrixBase<Derived>& X, Index k, Rng& rng,
                                              const KMeansOptions& options = {}) {
  using Scalar = typename Derived::Scalar;
  const Index n = X.rows();
  const Index p = X.cols();
  if (k < 1 || k > n) throw std::invalid_argument("kmeans: need 1 <= K <= n");
  if (options.n_starts < 1) throw std::invalid_argument("kmeans: need at least one start");

  KMeansResult<Scalar> best;
  best.wcss = std::numeric_limits<Scalar>::infinity();
  Labels labels(n), previous(n);
  VectorX<Scalar> dist(n);
  for (Index start = 0; start < options.n_starts; ++start) {
    MatrixX<Scalar> centers(k, p);
    const auto seeds = detail::sample_indices(n, k, rng);
    for (Index c = 0; c < k; ++c) centers.row(c) = X.row(seeds[static_cast<std::size_t>(c)]);

    std::vector<Scalar> trace;
    previous.setConstant(-1);
    for (Index it = 0; it < options.iter_max; ++it) {
      trace.push_back(detail::assign_nearest(X, centers, labels, dist));

      std::vector<Index> counts(static_cast<std::size_t>(k), 0);
      for (Index i = 0; i < n; ++i) ++counts[labels[i]];
      for (Index c = 0; c < k; ++c) {
        if (counts[c] > 0) continue;
        Index far = 0;
        dist.maxCoeff(&far);
        --counts[labels[far]];
        labels[far] = static_cast<int>(c);
        dist[far] = Scalar(0);
        ++counts[c];
      }
      if (labels == previous) break;
      previous = labels;

      centers.setZero();
      for (Index i = 0; i < n; ++i) centers.row(labels[i]) += X.row(i);
      for (Index c = 0; c < k; ++c) centers.row(c) /= static_cast<Scalar>(counts[c]);
    }
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    centers.setZero();
    for (Index i = 0; i < n; ++i) {
      centers.row(labels[i]) += X.row(i);
      ++counts[labels[i]];
    }
    for (Index c = 0; c < k; ++c) centers.row(c) /= static_cast<Scalar>(counts[c]);
    Scalar wcss(0);
    for (Index i = 0; i < n; ++i) wcss += (X.row(i) - centers.row(labels[i])).squaredNorm();
    if (wcss < best.wcss) {
      best.wcss = wcss;
      best.labels = labels;
      best.centers = centers;
      best.wcss_trace = std::move(trace);
      best.best_start = start;
    }
  }
  best.labels.array() += 1;
  return best;
}

}  // namespace pabench
