#include "pabench/pcluster.hpp"

#include "pabench/dist.hpp"
#include "pabench/eval.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace pabench {

namespace detail {

std::vector<Index> sample_indices(Index n, Index k, Rng& rng) {
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  for (Index i = 0; i < k; ++i) {
    const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

}  // namespace detail

namespace {

struct Nearest {
  std::vector<Index> first;  // position in the medoid list
  Eigen::VectorXd d1;        // distance to the nearest medoid
  Eigen::VectorXd d2;        // distance to the second nearest
};

Nearest nearest_medoids(const DistanceMatrix& D, const std::vector<Index>& medoids) {
  const Index n = D.rows();
  constexpr double inf = std::numeric_limits<double>::infinity();
  Nearest out{std::vector<Index>(static_cast<std::size_t>(n), 0), Eigen::VectorXd::Constant(n, inf),
              Eigen::VectorXd::Constant(n, inf)};
  for (Index j = 0; j < n; ++j) {
    for (std::size_t m = 0; m < medoids.size(); ++m) {
      const double d = D(j, medoids[m]);
      if (d < out.d1[j]) {
        out.d2[j] = out.d1[j];
        out.d1[j] = d;
        out.first[j] = static_cast<Index>(m);
      } else if (d < out.d2[j]) {
        out.d2[j] = d;
      }
    }
  }
  return out;
}

}  // namespace

double medoid_cost(const DistanceMatrix& D, const std::vector<Index>& medoids) {
  if (medoids.empty()) throw std::invalid_argument("medoid_cost: empty medoid set");
  return nearest_medoids(D, medoids).d1.sum();
}

PamResult pam(const DistanceMatrix& D, Index k) {
  const Index n = D.rows();
  check_distance_matrix(D);
  if (k < 1 || k > n) throw std::invalid_argument("pam: need 1 <= K <= n");

  // BUILD
  std::vector<Index> medoids;
  std::vector<bool> is_medoid(static_cast<std::size_t>(n), false);
  {
    Index first = 0;
    D.colwise().sum().minCoeff(&first);
    medoids.push_back(first);
    is_medoid[first] = true;
    Eigen::VectorXd near = D.col(first);
    while (static_cast<Index>(medoids.size()) < k) {
      Index pick = -1;
      double best_gain = -1.0;
      for (Index h = 0; h < n; ++h) {
        if (is_medoid[h]) continue;
        const double gain = (near - D.col(h)).cwiseMax(0.0).sum();
        if (gain > best_gain) {
          best_gain = gain;
          pick = h;
        }
      }
      medoids.push_back(pick);
      is_medoid[pick] = true;
      near = near.cwiseMin(D.col(pick));
    }
  }

  PamResult out;
  auto nearest = nearest_medoids(D, medoids);
  double cost = nearest.d1.sum();
  out.build_cost = cost;
  out.cost_trace.push_back(cost);

  // SWAP: apply the best improving exchange until none is left.
  for (;;) {
    double best_delta = 0.0;
    Index best_m = -1, best_h = -1;
    for (Index mi = 0; mi < k; ++mi) {
      for (Index h = 0; h < n; ++h) {
        if (is_medoid[h]) continue;
        double delta = 0.0;
        for (Index j = 0; j < n; ++j) {
          const double dh = D(j, h);
          if (nearest.first[j] == mi)
            delta += std::min(dh, nearest.d2[j]) - nearest.d1[j];
          else if (dh < nearest.d1[j])
            delta += dh - nearest.d1[j];
        }
        if (delta < best_delta) {
          best_delta = delta;
          best_m = mi;
          best_h = h;
        }
      }
    }
    if (best_m < 0 || best_delta > -1e-12 * std::max(1.0, cost)) break;
    is_medoid[medoids[best_m]] = false;
    is_medoid[best_h] = true;
    medoids[best_m] = best_h;
    nearest = nearest_medoids(D, medoids);
    cost = nearest.d1.sum();
    out.cost_trace.push_back(cost);
  }

  std::sort(medoids.begin(), medoids.end());
  nearest = nearest_medoids(D, medoids);
  Labels raw(n);
  for (Index j = 0; j < n; ++j) raw[j] = static_cast<int>(nearest.first[j]);
  out.labels = canonical_labels(raw);
  out.medoids = std::move(medoids);
  out.cost = nearest.d1.sum();
  return out;
}

BinaryVector majority_mode(const BinaryMatrix& data, const std::vector<Index>& rows) {
  Eigen::VectorXi ones = Eigen::VectorXi::Zero(data.cols());
  for (Index r : rows) ones += data.row(r).cast<int>().transpose();
  const int members = static_cast<int>(rows.size());
  return (2 * ones.array() >= members).cast<std::uint8_t>();
}

namespace {

Index mismatches(const BinaryMatrix& data, Index row, const BinaryMatrix& modes, Index c) {
  return (data.row(row).array() != modes.row(c).array()).count();
}

}  // namespace

KModesResult kmodes(const BinaryMatrix& data, Index k, Rng& rng, Index n_starts) {
  const Index n = data.rows();
  const Index m = data.cols();
  if (k < 1 || k > n) throw std::invalid_argument("kmodes: need 1 <= K <= n");
  if (n_starts < 1) throw std::invalid_argument("kmodes: need at least one start");

  auto row_key = [&](Index r) {
    return std::vector<std::uint8_t>(data.row(r).data(), data.row(r).data() + m);
  };
  {
    std::set<std::vector<std::uint8_t>> distinct;
    for (Index r = 0; r < n && static_cast<Index>(distinct.size()) < k; ++r) distinct.insert(row_key(r));
    if (static_cast<Index>(distinct.size()) < k) throw std::invalid_argument("kmodes: fewer than K distinct rows");
  }

  constexpr Index max_iter = 100;
  KModesResult best;
  best.cost = std::numeric_limits<Index>::max();
  for (Index start = 0; start < n_starts; ++start) {
    const auto order = detail::sample_indices(n, n, rng);
    BinaryMatrix modes(k, m);
    std::set<std::vector<std::uint8_t>> used;
    Index filled = 0;
    for (Index r : order) {
      if (!used.insert(row_key(r)).second) continue;
      modes.row(filled++) = data.row(r);
      if (filled == k) break;
    }

    Labels labels = Labels::Constant(n, -1);
    Labels previous = labels;
    std::vector<Index> trace;
    Index cost = 0;
    for (Index it = 0; it < max_iter; ++it) {
      cost = 0;
      for (Index i = 0; i < n; ++i) {
        Index best_c = 0;
        Index best_d = mismatches(data, i, modes, 0);
        for (Index c = 1; c < k; ++c) {
          const Index d = mismatches(data, i, modes, c);
          if (d < best_d) {
            best_d = d;
            best_c = c;
          }
        }
        labels[i] = static_cast<int>(best_c);
        cost += best_d;
      }
      trace.push_back(cost);
      if (labels == previous) break;
      previous = labels;

      std::vector<std::vector<Index>> members(static_cast<std::size_t>(k));
      for (Index i = 0; i < n; ++i) members[labels[i]].push_back(i);
      for (Index c = 0; c < k; ++c)
        if (!members[c].empty()) modes.row(c) = majority_mode(data, members[c]).transpose();
    }
    // Cost with respect to the final modes.
    cost = 0;
    for (Index i = 0; i < n; ++i) cost += mismatches(data, i, modes, labels[i]);
    if (cost < best.cost) {
      best.cost = cost;
      best.labels = labels;
      best.modes = modes;
      best.cost_trace = std::move(trace);
    }
  }
  best.labels.array() += 1;
  return best;
}

}  // namespace pabench
