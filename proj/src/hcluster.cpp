#include "pabench/hcluster.hpp"

#include "pabench/dist.hpp"
#include "pabench/eval.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

namespace pabench {

Dendrogram linkage(const DistanceMatrix& D, Linkage method) {
  const Index n = D.rows();
  check_distance_matrix(D);
  if (n < 2) throw std::invalid_argument("linkage: need at least two points");

  constexpr double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd W = D;
  std::vector<bool> active(static_cast<std::size_t>(n), true);
  std::vector<Index> size(static_cast<std::size_t>(n), 1);
  std::vector<Index> node(static_cast<std::size_t>(n));
  std::iota(node.begin(), node.end(), Index{0});

  // Row i caches its nearest active partner j > i (lowest j on ties).
  std::vector<Index> nn(static_cast<std::size_t>(n), -1);
  std::vector<double> nn_dist(static_cast<std::size_t>(n), inf);
  auto refresh = [&](Index i) {
    nn[i] = -1;
    nn_dist[i] = inf;
    for (Index j = i + 1; j < n; ++j)
      if (active[j] && W(i, j) < nn_dist[i]) {
        nn_dist[i] = W(i, j);
        nn[i] = j;
      }
  };
  for (Index i = 0; i < n; ++i) refresh(i);

  Dendrogram out;
  out.n_leaves = n;
  out.merges.reserve(static_cast<std::size_t>(n - 1));
  for (Index step = 0; step < n - 1; ++step) {
    Index a = -1;
    for (Index i = 0; i < n; ++i)
      if (active[i] && nn[i] >= 0 && (a < 0 || nn_dist[i] < nn_dist[a])) a = i;
    const Index b = nn[a];
    out.merges.push_back({node[a], node[b], nn_dist[a]});

    const double sa = static_cast<double>(size[a]);
    const double sb = static_cast<double>(size[b]);
    for (Index k = 0; k < n; ++k) {
      if (!active[k] || k == a || k == b) continue;
      double v = 0.0;
      switch (method) {
        case Linkage::single: v = std::min(W(a, k), W(b, k)); break;
        case Linkage::complete: v = std::max(W(a, k), W(b, k)); break;
        case Linkage::average: v = (sa * W(a, k) + sb * W(b, k)) / (sa + sb); break;
      }
      W(a, k) = W(k, a) = v;
    }
    active[b] = false;
    size[a] += size[b];
    node[a] = n + step;

    refresh(a);
    for (Index i = 0; i < b; ++i) {
      if (!active[i] || i == a) continue;
      if (nn[i] == a || nn[i] == b) {
        refresh(i);
      } else if (i < a && (W(i, a) < nn_dist[i] || (W(i, a) == nn_dist[i] && a < nn[i]))) {
        nn[i] = a;
        nn_dist[i] = W(i, a);
      }
    }
  }
  return out;
}

Labels cut(const Dendrogram& dendrogram, Index k) {
  const Index n = dendrogram.n_leaves;
  if (k < 1 || k > n) throw std::invalid_argument("cut: K must lie in 1..n");

  std::vector<Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  // Any leaf of a subtree represents it.
  std::vector<Index> leaf_of(static_cast<std::size_t>(2 * n - 1));
  std::iota(leaf_of.begin(), leaf_of.begin() + n, Index{0});
  for (Index s = 0; s < n - 1; ++s) {
    const auto& m = dendrogram.merges[static_cast<std::size_t>(s)];
    leaf_of[n + s] = leaf_of[m.left];
    if (s < n - k) parent[find(leaf_of[m.right])] = find(leaf_of[m.left]);
  }
  Labels roots(n);
  for (Index i = 0; i < n; ++i) roots[i] = static_cast<int>(find(i));
  return canonical_labels(roots);
}

BestCut best_cut_ari(const Dendrogram& dendrogram, const Labels& truth) {
  if (truth.size() != dendrogram.n_leaves) throw std::invalid_argument("best_cut_ari: size mismatch");
  BestCut best{-std::numeric_limits<double>::infinity(), 0};
  for (Index k = 1; k <= dendrogram.n_leaves; ++k) {
    const double ari = adjusted_rand_index(cut(dendrogram, k), truth);
    if (ari > best.ari) best = {ari, k};
  }
  return best;
}

}  // namespace pabench
