#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>

namespace pabench {

using Index = Eigen::Index;

// Presence-absence data: rows are species, columns are cells.
using BinaryMatrix =
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using BinaryVector = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>;

// Symmetric, zero diagonal, nonnegative.
using DistanceMatrix = Eigen::MatrixXd;

// Cluster assignments in 1..K.
using Labels = Eigen::VectorXi;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Euclidean configuration of n points in p dimensions.
template <typename Scalar>
struct Embedding {
  MatrixX<Scalar> coords;
  std::optional<Scalar> stress;

  Index size() const { return coords.rows(); }
  Index dim() const { return coords.cols(); }
};

/// Relabels so that clusters are numbered 1..K in order of their smallest
/// member index. Input labels may be any integers.
Labels canonical_labels(const Labels& labels);

/// Number of distinct labels.
Index count_clusters(const Labels& labels);

}  // namespace pabench
