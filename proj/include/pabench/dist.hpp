#pragma once

#include "pabench/types.hpp"

#include <Eigen/Core>

#include <stdexcept>

namespace pabench {

enum class Measure { jaccard, simple_matching };

/// 1 - |x and y| / |x or y|. Undefined when both vectors are all zero.
template <typename DerivedX, typename DerivedY>
double jaccard_distance(const Eigen::DenseBase<DerivedX>& x, const Eigen::DenseBase<DerivedY>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("jaccard_distance: length mismatch");
  Index joint = 0;
  Index either = 0;
  for (Index j = 0; j < x.size(); ++j) {
    const bool a = x(j) != 0;
    const bool b = y(j) != 0;
    joint += a && b;
    either += a || b;
  }
  if (either == 0) throw std::domain_error("Jaccard undefined for empty union");
  return 1.0 - static_cast<double>(joint) / static_cast<double>(either);
}

/// Fraction of mismatching coordinates.
template <typename DerivedX, typename DerivedY>
double simple_matching_distance(const Eigen::DenseBase<DerivedX>& x, const Eigen::DenseBase<DerivedY>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("simple_matching_distance: length mismatch");
  if (x.size() == 0) throw std::invalid_argument("simple_matching_distance: empty vectors");
  Index mismatches = 0;
  for (Index j = 0; j < x.size(); ++j) mismatches += (x(j) != 0) != (y(j) != 0);
  return static_cast<double>(mismatches) / static_cast<double>(x.size());
}

/// All pairwise distances between the rows of `data`.
DistanceMatrix distance_matrix(const BinaryMatrix& data, Measure measure);

/// Throws std::invalid_argument unless D is square, symmetric, has a zero
/// diagonal and nonnegative entries.
void check_distance_matrix(const DistanceMatrix& D);

}  // namespace pabench
