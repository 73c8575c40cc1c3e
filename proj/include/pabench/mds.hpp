#pragma once

#include "pabench/types.hpp"

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pabench {

namespace detail {

template <typename Derived>
MatrixX<typename Derived::Scalar> pairwise_euclidean(const Eigen::MatrixBase<Derived>& X) {
  using Scalar = typename Derived::Scalar;
  const Index n = X.rows();
  MatrixX<Scalar> d = MatrixX<Scalar>::Zero(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = j + 1; i < n; ++i) d(i, j) = d(j, i) = (X.row(i) - X.row(j)).norm();
  return d;
}

// Flip each column so that its largest-magnitude entry is positive.
template <typename Scalar>
void normalize_signs(MatrixX<Scalar>& V) {
  for (Index k = 0; k < V.cols(); ++k) {
    Index arg = 0;
    V.col(k).cwiseAbs().maxCoeff(&arg);
    if (V(arg, k) < Scalar(0)) V.col(k) = -V.col(k);
  }
}

}  // namespace detail

/// Classical (Torgerson) scaling. Axes come in descending eigenvalue
/// order; axes with a nonpositive eigenvalue are zero. When `eigenvalues`
/// is given it receives the top-p eigenvalues of the double-centred matrix.
template <typename Derived>
Embedding<typename Derived::Scalar> classical_mds(const Eigen::MatrixBase<Derived>& D, Index p,
                                                  VectorX<typename Derived::Scalar>* eigenvalues = nullptr) {
  using Scalar = typename Derived::Scalar;
  const Index n = D.rows();
  if (D.cols() != n) throw std::invalid_argument("classical_mds: distance matrix must be square");
  if (n < 2) throw std::invalid_argument("classical_mds: need at least two points");
  if (p < 1 || p > n - 1) throw std::invalid_argument("classical_mds: need 1 <= p <= n - 1");

  const MatrixX<Scalar> sq = D.array().square().matrix();
  const VectorX<Scalar> row_mean = sq.rowwise().mean();
  const Scalar grand = row_mean.mean();
  MatrixX<Scalar> B = sq;
  B.colwise() -= row_mean;
  B.rowwise() -= row_mean.transpose();
  B.array() += grand;
  B *= Scalar(-0.5);

  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(B);
  if (solver.info() != Eigen::Success) throw std::runtime_error("classical_mds: eigendecomposition failed");

  MatrixX<Scalar> V = solver.eigenvectors().rightCols(p).rowwise().reverse();
  VectorX<Scalar> lambda = solver.eigenvalues().tail(p).reverse();
  detail::normalize_signs(V);

  Embedding<Scalar> out;
  out.coords = V * lambda.cwiseMax(Scalar(0)).cwiseSqrt().asDiagonal();
  if (eigenvalues) *eigenvalues = lambda;
  return out;
}

struct SmacofOptions {
  Index max_iter = 500;
  double eps = 1e-6;  // stop once one iteration lowers stress by less than this
};

template <typename Scalar>
struct SmacofResult {
  Embedding<Scalar> embedding;
  // Stress of the starting configuration, then after every iteration.
  std::vector<Scalar> stress_history;
  Scalar ratio = Scalar(0);
  Index iterations = 0;
};

/// Least-squares ratio b for the current configuration:
/// sum(delta_ij * d_ij) / sum(delta_ij^2) over i < j.
template <typename DerivedD, typename DerivedX>
typename DerivedD::Scalar optimal_ratio(const Eigen::MatrixBase<DerivedD>& delta, const Eigen::MatrixBase<DerivedX>& X) {
  using Scalar = typename DerivedD::Scalar;
  const auto d = detail::pairwise_euclidean(X);
  Scalar cross(0), norm(0);
  for (Index j = 0; j < d.cols(); ++j)
    for (Index i = j + 1; i < d.rows(); ++i) {
      cross += delta(i, j) * d(i, j);
      norm += delta(i, j) * delta(i, j);
    }
  return cross / norm;
}

/// sum((b delta_ij - d_ij)^2) / sum((b delta_ij)^2) over i < j.
template <typename DerivedD, typename DerivedX>
typename DerivedD::Scalar normalized_stress(const Eigen::MatrixBase<DerivedD>& delta, const Eigen::MatrixBase<DerivedX>& X,
                                            typename DerivedD::Scalar b) {
  using Scalar = typename DerivedD::Scalar;
  const auto d = detail::pairwise_euclidean(X);
  Scalar num(0), den(0);
  for (Index j = 0; j < d.cols(); ++j)
    for (Index i = j + 1; i < d.rows(); ++i) {
      const Scalar target = b * delta(i, j);
      num += (target - d(i, j)) * (target - d(i, j));
      den += target * target;
    }
  return num / den;
}

/// Ratio MDS by stress majorization. Each iteration sets the ratio b to
/// its least-squares value for the current configuration and applies one
/// Guttman transform towards the targets b * delta. Because the Guttman
/// transform is scale-free in X, the reported normalized stress can never
/// increase.
template <typename DerivedD>
SmacofResult<typename DerivedD::Scalar> ratio_smacof(const Eigen::MatrixBase<DerivedD>& delta,
                                                     const Embedding<typename DerivedD::Scalar>& init,
                                                     const SmacofOptions& options = {}) {
  using Scalar = typename DerivedD::Scalar;
  const Index n = delta.rows();
  if (delta.cols() != n) throw std::invalid_argument("ratio_smacof: distance matrix must be square");
  if (init.size() != n || init.dim() < 1) throw std::invalid_argument("ratio_smacof: initial configuration has the wrong shape");
  if (!init.coords.allFinite()) throw std::invalid_argument("ratio_smacof: initial configuration is not finite");
  if (n < 2 || delta.cwiseAbs().maxCoeff() == Scalar(0)) throw std::invalid_argument("ratio_smacof: all-zero dissimilarities");

  MatrixX<Scalar> X = init.coords;
  X.rowwise() -= X.colwise().mean();

  auto stress_and_ratio = [&](const MatrixX<Scalar>& config, MatrixX<Scalar>& d) {
    d = detail::pairwise_euclidean(config);
    Scalar cross(0), norm(0);
    for (Index j = 0; j < n; ++j)
      for (Index i = j + 1; i < n; ++i) {
        cross += delta(i, j) * d(i, j);
        norm += delta(i, j) * delta(i, j);
      }
    if (!(cross > Scalar(0))) throw std::runtime_error("ratio_smacof: configuration collapsed to a point");
    const Scalar b = cross / norm;
    Scalar num(0);
    for (Index j = 0; j < n; ++j)
      for (Index i = j + 1; i < n; ++i) {
        const Scalar r = b * delta(i, j) - d(i, j);
        num += r * r;
      }
    return std::pair<Scalar, Scalar>{num / (b * b * norm), b};
  };

  SmacofResult<Scalar> result;
  MatrixX<Scalar> d;
  auto [stress, b] = stress_and_ratio(X, d);
  result.stress_history.push_back(stress);

  MatrixX<Scalar> B(n, n);
  for (Index it = 0; it < options.max_iter; ++it) {
    B.setZero();
    for (Index j = 0; j < n; ++j)
      for (Index i = j + 1; i < n; ++i)
        if (d(i, j) > Scalar(0)) B(i, j) = B(j, i) = -b * delta(i, j) / d(i, j);
    B.diagonal() = -B.rowwise().sum();
    X = (B * X) / Scalar(n);

    auto [next_stress, next_b] = stress_and_ratio(X, d);
    result.stress_history.push_back(next_stress);
    ++result.iterations;
    const Scalar decrease = stress - next_stress;
    stress = next_stress;
    b = next_b;
    if (decrease < Scalar(options.eps)) break;
  }

  X.rowwise() -= X.colwise().mean();
  result.embedding.coords = std::move(X);
  result.embedding.stress = stress;
  result.ratio = b;
  return result;
}

}  // namespace pabench
