#pragma once

#include "pabench/types.hpp"

#include <Eigen/Core>

#include <cstdint>

namespace pabench {

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using CountVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

struct ContingencyTable {
  CountMatrix counts;  // rows: distinct labels of a, columns: of b
  CountVector row_sums;
  CountVector col_sums;
  std::int64_t n = 0;
};

ContingencyTable contingency_table(const Labels& a, const Labels& b);

/// Hubert-Arabie adjusted Rand index. Identical partitions score 1;
/// otherwise a degenerate denominator scores 0. Pair counts are kept in
/// exact integer arithmetic until the final division.
double adjusted_rand_index(const Labels& a, const Labels& b);

}  // namespace pabench
