#include "oracles.hpp"
#include "pabench/eval.hpp"
#include "pabench/hcluster.hpp"

#include <doctest.h>

using namespace pabench;

namespace {

DistanceMatrix three_points() {
  DistanceMatrix D(3, 3);
  D << 0, 1, 5, 1, 0, 3, 5, 3, 0;
  return D;
}

std::vector<double> heights(const Dendrogram& d) {
  std::vector<double> h;
  for (const auto& m : d.merges) h.push_back(m.height);
  return h;
}

}  // namespace

TEST_CASE("three-point linkages") {
  const auto D = three_points();
  CHECK(heights(linkage(D, Linkage::single)) == std::vector<double>{1, 3});
  CHECK(heights(linkage(D, Linkage::complete)) == std::vector<double>{1, 5});
  CHECK(heights(linkage(D, Linkage::average)) == std::vector<double>{1, 4});

  const auto d = linkage(D, Linkage::average);
  CHECK(d.n_leaves == 3);
  CHECK(d.merges[0].left == 0);
  CHECK(d.merges[0].right == 1);
  CHECK(((d.merges[1].left == 3 && d.merges[1].right == 2) || (d.merges[1].left == 2 && d.merges[1].right == 3)));

  Labels two(3);
  two << 1, 1, 2;
  CHECK(cut(d, 2) == two);
}

TEST_CASE("cut extremes") {
  Rng rng(31);
  const auto D = oracle::random_dissimilarities(12, rng);
  const auto d = linkage(D, Linkage::complete);
  Labels singletons(12);
  for (Index i = 0; i < 12; ++i) singletons[i] = static_cast<int>(i) + 1;
  CHECK(cut(d, 12) == singletons);
  CHECK(cut(d, 1) == Labels::Ones(12));
  for (Index k = 1; k <= 12; ++k) CHECK(count_clusters(cut(d, k)) == k);
  CHECK_THROWS(cut(d, 0));
  CHECK_THROWS(cut(d, 13));
}

TEST_CASE("linkage heights match the naive recomputation") {
  Rng rng(32);
  for (int rep = 0; rep < 10; ++rep) {
    const Index n = 5 + 3 * rep;
    const auto D = oracle::random_dissimilarities(n, rng);
    for (Linkage method : {Linkage::single, Linkage::complete, Linkage::average}) {
      const auto got = heights(linkage(D, method));
      const auto want = oracle::naive_linkage_heights(D, method);
      REQUIRE(got.size() == want.size());
      for (std::size_t s = 0; s < got.size(); ++s) {
        if (method == Linkage::average)
          CHECK(got[s] == doctest::Approx(want[s]).epsilon(1e-12));
        else
          CHECK(got[s] == want[s]);
      }
    }
  }
}

TEST_CASE("single linkage heights are the minimum spanning tree edges") {
  Rng rng(33);
  const auto D = oracle::random_dissimilarities(40, rng);
  CHECK(heights(linkage(D, Linkage::single)) == oracle::mst_edges(D));
}

TEST_CASE("dendrogram structure and monotone heights") {
  Rng rng(34);
  const auto X = oracle::random_points(30, 2, rng);
  const auto D = oracle::euclidean_distances(X);
  for (Linkage method : {Linkage::single, Linkage::complete, Linkage::average}) {
    const auto d = linkage(D, method);
    REQUIRE(d.merges.size() == 29);
    std::vector<int> used(59, 0);
    for (std::size_t s = 0; s < d.merges.size(); ++s) {
      const auto& m = d.merges[s];
      CHECK(m.left < 30 + Index(s));
      CHECK(m.right < 30 + Index(s));
      ++used[static_cast<std::size_t>(m.left)];
      ++used[static_cast<std::size_t>(m.right)];
      if (s > 0) CHECK(m.height >= d.merges[s - 1].height);
    }
    for (std::size_t node = 0; node < 58; ++node) CHECK(used[node] == 1);
  }
}

TEST_CASE("ties go to the lexicographically smallest pair") {
  DistanceMatrix D = DistanceMatrix::Ones(4, 4);
  D.diagonal().setZero();
  const auto d = linkage(D, Linkage::single);
  CHECK(d.merges[0].left == 0);
  CHECK(d.merges[0].right == 1);
  // {0,1} (node 4) is now the cluster with the smallest member.
  CHECK(((d.merges[1].left == 4 && d.merges[1].right == 2) || (d.merges[1].left == 2 && d.merges[1].right == 4)));
}

TEST_CASE("best cut over all K") {
  const auto d = linkage(three_points(), Linkage::single);
  Labels truth(3);
  truth << 1, 1, 2;
  auto best = best_cut_ari(d, truth);
  CHECK(best.ari == 1.0);
  CHECK(best.k == 2);

  // Truth with one cluster: every cut above K = 1 scores 0, K = 1 scores 1.
  best = best_cut_ari(d, Labels::Ones(3));
  CHECK(best.ari == 1.0);
  CHECK(best.k == 1);

  Rng rng(35);
  const auto D = oracle::random_dissimilarities(20, rng);
  const auto dd = linkage(D, Linkage::average);
  const auto labels = oracle::random_labels(20, 3, rng);
  best = best_cut_ari(dd, labels);
  double scan = -2.0;
  for (Index k = 1; k <= 20; ++k) scan = std::max(scan, adjusted_rand_index(cut(dd, k), labels));
  CHECK(best.ari == scan);
  CHECK(adjusted_rand_index(cut(dd, best.k), labels) == best.ari);
}

TEST_CASE("linkage input checks") {
  CHECK_THROWS(linkage(DistanceMatrix(1, 1), Linkage::single));
  DistanceMatrix bad(2, 2);
  bad << 0, 1, 2, 0;
  CHECK_THROWS(linkage(bad, Linkage::single));
}
