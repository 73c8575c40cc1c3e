#pragma once

#include "pabench/types.hpp"

#include <vector>

namespace pabench {

enum class Linkage { single, complete, average };

/// One agglomeration step. Leaves are nodes 0..n-1; step s creates node n+s.
struct Merge {
  Index left;
  Index right;
  double height;
};

struct Dendrogram {
  Index n_leaves = 0;
  std::vector<Merge> merges;
};

/// Agglomerative clustering with Lance-Williams updates. Each step merges
/// the closest pair of clusters; equal heights go to the lexicographically
/// smallest pair, clusters being indexed by their smallest member.
Dendrogram linkage(const DistanceMatrix& D, Linkage method);

/// Flat partition with K clusters, obtained by undoing the last K-1 merges.
/// Labels are numbered in order of each cluster's smallest member.
Labels cut(const Dendrogram& dendrogram, Index k);

struct BestCut {
  double ari;
  Index k;
};

/// Scans every K = 1..n and returns the highest ARI against `truth`
/// together with the smallest K achieving it.
BestCut best_cut_ari(const Dendrogram& dendrogram, const Labels& truth);

}  // namespace pabench
