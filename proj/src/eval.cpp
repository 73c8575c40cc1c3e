#include "pabench/eval.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace pabench {

namespace {

// Maps arbitrary labels to 0..K-1 in order of first appearance.
Eigen::VectorXi compress(const Labels& labels, Index& k) {
  std::unordered_map<int, int> ids;
  Eigen::VectorXi out(labels.size());
  for (Index i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = ids.emplace(labels[i], static_cast<int>(ids.size()));
    out[i] = it->second;
  }
  k = static_cast<Index>(ids.size());
  return out;
}

std::int64_t choose2(std::int64_t x) { return x * (x - 1) / 2; }

}  // namespace

Labels canonical_labels(const Labels& labels) {
  Index k = 0;
  Labels out = compress(labels, k);
  out.array() += 1;
  return out;
}

Index count_clusters(const Labels& labels) {
  Index k = 0;
  compress(labels, k);
  return k;
}

ContingencyTable contingency_table(const Labels& a, const Labels& b) {
  if (a.size() != b.size()) throw std::invalid_argument("contingency_table: label vectors differ in length");
  Index ka = 0, kb = 0;
  const auto ca = compress(a, ka);
  const auto cb = compress(b, kb);
  ContingencyTable t;
  t.counts = CountMatrix::Zero(ka, kb);
  for (Index i = 0; i < a.size(); ++i) ++t.counts(ca[i], cb[i]);
  t.row_sums = t.counts.rowwise().sum();
  t.col_sums = t.counts.colwise().sum().transpose();
  t.n = a.size();
  return t;
}

double adjusted_rand_index(const Labels& a, const Labels& b) {
  if (a.size() != b.size()) throw std::invalid_argument("adjusted_rand_index: label vectors differ in length");
  if (a.size() < 2) throw std::invalid_argument("adjusted_rand_index: need at least two observations");
  const auto t = contingency_table(a, b);

  // Same partition up to relabelling: every row and column of the table
  // has a single nonzero cell.
  const bool identical = t.counts.rows() == t.counts.cols() &&
                         ((t.counts.array() > 0).rowwise().count() == 1).all() &&
                         ((t.counts.array() > 0).colwise().count() == 1).all();
  if (identical) return 1.0;

  using Wide = __int128;
  Wide index = 0, sum_a = 0, sum_b = 0;
  for (Index j = 0; j < t.counts.cols(); ++j)
    for (Index i = 0; i < t.counts.rows(); ++i) index += choose2(t.counts(i, j));
  for (auto r : t.row_sums) sum_a += choose2(r);
  for (auto c : t.col_sums) sum_b += choose2(c);
  const Wide pairs = choose2(t.n);

  // (index - expected) / (max - expected), scaled by 2 * pairs.
  const Wide num = 2 * (index * pairs - sum_a * sum_b);
  const Wide den = (sum_a + sum_b) * pairs - 2 * sum_a * sum_b;
  if (den == 0) return 0.0;
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

}  // namespace pabench
