#pragma once

#include "pabench/types.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace pabench {

template <typename Scalar>
struct DensityProfile {
  VectorX<Scalar> densities;   // estimate at each data point
  VectorX<Scalar> bandwidths;  // one per dimension
  VectorX<Scalar> grid;        // threshold levels, ascending
};

struct LevelSetResult {
  Labels labels;
  Index n_clusters = 0;
  std::vector<std::vector<Index>> cores;  // point indices of each cluster core
};

namespace detail {

template <typename Derived, typename Scalar>
MatrixX<Scalar> scaled(const Eigen::MatrixBase<Derived>& X, const VectorX<Scalar>& h) {
  if (h.size() != X.cols()) throw std::invalid_argument("kde: one bandwidth per dimension required");
  if (!(h.array() > Scalar(0)).all()) throw std::invalid_argument("kde: bandwidths must be positive");
  return X.template cast<Scalar>() * h.cwiseInverse().asDiagonal();
}

template <typename Scalar>
Scalar kernel_constant(const VectorX<Scalar>& h, Index n) {
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  return Scalar(1) / (Scalar(n) * std::pow(two_pi, Scalar(h.size()) / Scalar(2)) * h.prod());
}

// exp(-factor * |z_a - z_b|^2) for all pairs of rows.
template <typename Scalar>
MatrixX<Scalar> gaussian_gram(const MatrixX<Scalar>& Z, Scalar factor) {
  const Index n = Z.rows();
  MatrixX<Scalar> G(n, n);
  for (Index j = 0; j < n; ++j) {
    G(j, j) = Scalar(1);
    for (Index i = j + 1; i < n; ++i) G(i, j) = G(j, i) = std::exp(-factor * (Z.row(i) - Z.row(j)).squaredNorm());
  }
  return G;
}

}  // namespace detail

/// Normal-reference rule h_d = scale * sd_d * (4 / ((p + 2) n))^(1 / (p + 4)).
template <typename Derived>
VectorX<typename Derived::Scalar> normal_reference_bandwidths(const Eigen::MatrixBase<Derived>& X,
                                                              typename Derived::Scalar scale = 1) {
  using Scalar = typename Derived::Scalar;
  const Index n = X.rows();
  const Index p = X.cols();
  if (n < 2) throw std::invalid_argument("kde: need at least two points");
  const MatrixX<Scalar> centered = X.rowwise() - X.colwise().mean();
  const VectorX<Scalar> sd = (centered.colwise().squaredNorm() / Scalar(n - 1)).cwiseSqrt().transpose();
  if (!(sd.array() > Scalar(0)).all()) throw std::invalid_argument("kde: zero-variance coordinate");
  const Scalar factor = std::pow(Scalar(4) / (Scalar(p + 2) * Scalar(n)), Scalar(1) / Scalar(p + 4));
  return scale * factor * sd;
}

/// Product-Gaussian kernel density estimate of sample X evaluated at the
/// rows of Q.
template <typename DerivedX, typename DerivedQ>
VectorX<typename DerivedX::Scalar> kde_at(const Eigen::MatrixBase<DerivedX>& X,
                                          const VectorX<typename DerivedX::Scalar>& bandwidths,
                                          const Eigen::MatrixBase<DerivedQ>& Q) {
  using Scalar = typename DerivedX::Scalar;
  if (X.rows() < 2) throw std::invalid_argument("kde: need at least two points");
  if (Q.cols() != X.cols()) throw std::invalid_argument("kde: query dimension mismatch");
  const MatrixX<Scalar> Z = detail::scaled(X, bandwidths);
  const MatrixX<Scalar> W = detail::scaled(Q, bandwidths);
  VectorX<Scalar> out(W.rows());
  for (Index q = 0; q < W.rows(); ++q) {
    Scalar s(0);
    for (Index i = 0; i < Z.rows(); ++i) s += std::exp(Scalar(-0.5) * (W.row(q) - Z.row(i)).squaredNorm());
    out[q] = s;
  }
  return out * detail::kernel_constant(bandwidths, X.rows());
}

/// Kernel density estimate at the sample points themselves.
template <typename Derived>
VectorX<typename Derived::Scalar> kde(const Eigen::MatrixBase<Derived>& X,
                                      const VectorX<typename Derived::Scalar>& bandwidths) {
  using Scalar = typename Derived::Scalar;
  if (X.rows() < 2) throw std::invalid_argument("kde: need at least two points");
  const MatrixX<Scalar> Z = detail::scaled(X, bandwidths);
  return detail::gaussian_gram(Z, Scalar(0.5)).rowwise().sum() * detail::kernel_constant(bandwidths, X.rows());
}

/// Densities, normal-reference bandwidths times `bandwidth_scale`, and a
/// grid made of the n sample quantiles of the densities.
template <typename Derived>
DensityProfile<typename Derived::Scalar> density_profile(const Eigen::MatrixBase<Derived>& X,
                                                         typename Derived::Scalar bandwidth_scale = 1) {
  using Scalar = typename Derived::Scalar;
  DensityProfile<Scalar> profile;
  profile.bandwidths = normal_reference_bandwidths(X, bandwidth_scale);
  profile.densities = kde(X, profile.bandwidths);
  profile.grid = profile.densities;
  std::sort(profile.grid.begin(), profile.grid.end());
  return profile;
}

/// Level-set clustering. Two points are linked at level lambda when both
/// have density >= lambda and so does the midpoint of the segment joining
/// them. Sweeping the grid from the top, a component observed with at
/// least two points becomes a cluster core when it meets another such
/// component; components that never meet one become cores at the bottom.
/// Remaining points join, in order of decreasing density, the cluster
/// with the largest kernel sum at that point. The number of clusters is an
/// output.
template <typename Derived>
LevelSetResult level_set_cluster(const Eigen::MatrixBase<Derived>& X,
                                 const DensityProfile<typename Derived::Scalar>& profile) {
  using Scalar = typename Derived::Scalar;
  const Index n = X.rows();
  if (n < 2) throw std::invalid_argument("level_set_cluster: need at least two points");
  if (profile.densities.size() != n || profile.grid.size() == 0)
    throw std::invalid_argument("level_set_cluster: profile does not match the data");

  const MatrixX<Scalar> Z = detail::scaled(X, profile.bandwidths);
  const Scalar c = detail::kernel_constant(profile.bandwidths, n);
  const MatrixX<Scalar> E = detail::gaussian_gram(Z, Scalar(0.5));
  const VectorX<Scalar>& f = profile.densities;

  // For midpoint m of z_a, z_b:
  //   |m - z_i|^2 / 2 = |z_a - z_i|^2 / 4 + |z_b - z_i|^2 / 4 - |z_a - z_b|^2 / 8,
  // so the midpoint kernel sums are a Gram product of exp(-|.|^2 / 4).
  const MatrixX<Scalar> F = detail::gaussian_gram(Z, Scalar(0.25));
  const MatrixX<Scalar> FF = F * F;
  struct Edge {
    Scalar weight;
    Index a, b;
  };
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index b = 0; b < n; ++b) {
    for (Index a = 0; a < b; ++a) {
      const Scalar gap = (Z.row(a) - Z.row(b)).squaredNorm();
      Scalar mid;
      if (gap <= Scalar(1400)) {
        mid = c * std::exp(gap / Scalar(8)) * FF(a, b);
      } else {
        const auto m = (Z.row(a) + Z.row(b)) / Scalar(2);
        Scalar s(0);
        for (Index i = 0; i < n; ++i) s += std::exp(Scalar(-0.5) * (m - Z.row(i)).squaredNorm());
        mid = c * s;
      }
      edges.push_back({std::min({f[a], f[b], mid}), a, b});
    }
  }
  std::stable_sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return x.weight > y.weight; });

  std::vector<Index> by_density(static_cast<std::size_t>(n));
  std::iota(by_density.begin(), by_density.end(), Index{0});
  std::stable_sort(by_density.begin(), by_density.end(), [&](Index x, Index y) { return f[x] > f[y]; });

  std::vector<Scalar> levels(profile.grid.begin(), profile.grid.end());
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::vector<Index> parent(static_cast<std::size_t>(n), -1);  // -1: not yet above the level
  auto find = [&](Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  struct Component {
    std::vector<Index> members;
    std::vector<Index> cores;
  };
  std::vector<Component> comp(static_cast<std::size_t>(n));  // indexed by root
  std::vector<std::vector<Index>> cores;

  std::size_t next_vertex = 0, next_edge = 0;
  std::vector<Index> roots;  // component roots observed at the previous level
  for (Scalar lambda : levels) {
    const std::vector<Index> before = roots;
    std::vector<Index> fresh;
    while (next_vertex < by_density.size() && f[by_density[next_vertex]] >= lambda) {
      const Index v = by_density[next_vertex++];
      parent[v] = v;
      comp[v] = {{v}, {}};
      fresh.push_back(v);
    }
    std::vector<std::pair<Index, Index>> links;
    while (next_edge < edges.size() && edges[next_edge].weight >= lambda) {
      const auto& e = edges[next_edge++];
      const Index ra = find(e.a), rb = find(e.b);
      if (ra == rb) continue;
      parent[rb] = ra;
      links.emplace_back(ra, rb);
    }
    if (links.empty() && fresh.empty()) continue;

    // Group the previous-level components by their component at this level.
    std::vector<std::pair<Index, Index>> grouped;  // (new root, old root)
    for (Index r : before) grouped.emplace_back(find(r), r);
    for (Index v : fresh) grouped.emplace_back(find(v), -1 - v);
    std::stable_sort(grouped.begin(), grouped.end(), [](auto& x, auto& y) { return x.first < y.first; });

    std::vector<Component> merged_state;
    std::vector<Index> new_roots;
    for (std::size_t g = 0; g < grouped.size();) {
      std::size_t h = g;
      while (h < grouped.size() && grouped[h].first == grouped[g].first) ++h;
      Index significant = 0;
      for (std::size_t q = g; q < h; ++q)
        if (grouped[q].second >= 0 && comp[grouped[q].second].members.size() >= 2) ++significant;
      Component next;
      for (std::size_t q = g; q < h; ++q) {
        if (grouped[q].second < 0) {
          next.members.push_back(-1 - grouped[q].second);
          continue;
        }
        Component& old = comp[grouped[q].second];
        if (significant >= 2 && old.members.size() >= 2 && old.cores.empty()) {
          old.cores.push_back(static_cast<Index>(cores.size()));
          cores.push_back(old.members);
        }
        next.members.insert(next.members.end(), old.members.begin(), old.members.end());
        next.cores.insert(next.cores.end(), old.cores.begin(), old.cores.end());
      }
      new_roots.push_back(grouped[g].first);
      merged_state.push_back(std::move(next));
      g = h;
    }
    for (std::size_t q = 0; q < new_roots.size(); ++q) comp[new_roots[q]] = std::move(merged_state[q]);
    roots = std::move(new_roots);
  }
  for (Index r : roots) {
    Component& last = comp[r];
    if (last.members.size() >= 2 && last.cores.empty()) {
      last.cores.push_back(static_cast<Index>(cores.size()));
      cores.push_back(last.members);
    }
  }
  if (cores.empty()) {
    std::vector<Index> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), Index{0});
    cores.push_back(std::move(all));
  }

  // Classify the remaining points by kernel votes of the growing clusters.
  const Index k = static_cast<Index>(cores.size());
  Labels labels = Labels::Constant(n, -1);
  MatrixX<Scalar> votes = MatrixX<Scalar>::Zero(n, k);
  for (Index q = 0; q < k; ++q)
    for (Index i : cores[static_cast<std::size_t>(q)]) {
      labels[i] = static_cast<int>(q);
      votes.col(q) += E.col(i);
    }
  for (Index v : by_density) {
    if (labels[v] >= 0) continue;
    Index best = 0;
    votes.row(v).maxCoeff(&best);
    labels[v] = static_cast<int>(best);
    votes.col(best) += E.col(v);
  }

  LevelSetResult out;
  out.labels = canonical_labels(labels);
  out.n_clusters = k;
  out.cores = std::move(cores);
  return out;
}

}  // namespace pabench
