#include "oracles.hpp"
#include "pabench/mds.hpp"

#include <doctest.h>

using namespace pabench;

TEST_CASE("classical MDS of two points") {
  Eigen::MatrixXd D(2, 2);
  D << 0, 2, 2, 0;
  Eigen::VectorXd lambda;
  const auto e = classical_mds(D, 1, &lambda);
  CHECK(std::abs(e.coords(0, 0)) == doctest::Approx(1.0));
  CHECK(e.coords(0, 0) == doctest::Approx(-e.coords(1, 0)));
  CHECK(lambda[0] == doctest::Approx(2.0));
  CHECK(!e.stress.has_value());
}

TEST_CASE("classical MDS recovers collinear points up to isometry") {
  Eigen::MatrixXd X(3, 1);
  X << 0, 1, 3;
  const auto D = oracle::euclidean_distances(X);
  const auto e = classical_mds(D, 1);
  const Eigen::MatrixXd centered = X.rowwise() - X.colwise().mean();
  const bool same = e.coords.isApprox(centered, 1e-12);
  const bool flipped = e.coords.isApprox(-centered, 1e-12);
  CHECK((same || flipped));
  CHECK(e.coords.sum() == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("classical MDS reproduces Euclidean configurations") {
  Rng rng(21);
  for (int rep = 0; rep < 5; ++rep) {
    const auto X = oracle::random_points(5 + rep, 2, rng, 3.0);
    const auto D = oracle::euclidean_distances(X);
    Eigen::VectorXd lambda;
    const auto e = classical_mds(D, 2, &lambda);
    CHECK((oracle::euclidean_distances(e.coords) - D).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(e.coords.squaredNorm() == doctest::Approx(lambda.sum()).epsilon(1e-10));
    CHECK(lambda[0] >= lambda[1]);
    CHECK(e.coords.colwise().sum().cwiseAbs().maxCoeff() < 1e-9);
    // Axes are mutually orthogonal.
    CHECK(std::abs(e.coords.col(0).dot(e.coords.col(1))) < 1e-8);
  }
}

TEST_CASE("classical MDS: the 2-D solution is the leading part of the 3-D one") {
  Rng rng(22);
  const auto D = oracle::random_dissimilarities(30, rng);
  const auto e2 = classical_mds(D, 2);
  const auto e3 = classical_mds(D, 3);
  CHECK(e3.coords.leftCols(2).isApprox(e2.coords, 1e-12));
  // Sign convention: the largest-magnitude entry of each axis is positive.
  for (Index k = 0; k < 3; ++k) {
    Index arg = 0;
    e3.coords.col(k).cwiseAbs().maxCoeff(&arg);
    CHECK(e3.coords(arg, k) > 0);
  }
}

TEST_CASE("classical MDS argument checks") {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(3, 3);
  CHECK_THROWS(classical_mds(D, 3));
  CHECK_THROWS(classical_mds(D, 0));
  CHECK_THROWS(classical_mds(Eigen::MatrixXd(2, 3), 1));
}

TEST_CASE("optimal ratio and normalized stress") {
  Eigen::MatrixXd X(2, 1);
  X << 0, 2;
  Eigen::MatrixXd delta(2, 2);
  delta << 0, 1, 1, 0;
  CHECK(optimal_ratio(delta, X) == doctest::Approx(2.0));
  CHECK(normalized_stress(delta, X, 2.0) == doctest::Approx(0.0));
  CHECK(normalized_stress(delta, X, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("ratio SMACOF leaves an exact fit unchanged") {
  Rng rng(23);
  const auto X = oracle::random_points(8, 2, rng);
  const Eigen::MatrixXd delta = 0.5 * oracle::euclidean_distances(X);
  Embedding<double> init{X, std::nullopt};
  const auto r = ratio_smacof(delta, init);
  CHECK(*r.embedding.stress < 1e-20);
  CHECK(r.ratio == doctest::Approx(2.0).epsilon(1e-12));
  const Eigen::MatrixXd centered = X.rowwise() - X.colwise().mean();
  CHECK((r.embedding.coords - centered).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("ratio SMACOF never increases stress") {
  Rng rng(24);
  for (int rep = 0; rep < 5; ++rep) {
    const auto delta = oracle::random_dissimilarities(20, rng);
    for (Index p : {2, 3}) {
      const auto init = classical_mds(delta, p);
      const auto r = ratio_smacof(delta, init, {500, 1e-9});
      const auto& h = r.stress_history;
      REQUIRE(h.size() >= 2);
      for (std::size_t t = 1; t < h.size(); ++t) CHECK(h[t] <= h[t - 1] * (1 + 1e-12) + 1e-15);
      CHECK(h.back() <= h.front());
      CHECK(*r.embedding.stress == doctest::Approx(h.back()));
      // Reported stress is consistent with the returned configuration.
      const double b = optimal_ratio(delta, r.embedding.coords);
      CHECK(normalized_stress(delta, r.embedding.coords, b) == doctest::Approx(h.back()).epsilon(1e-8));
      CHECK(r.embedding.coords.colwise().sum().cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("ratio SMACOF input checks") {
  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(3, 3);
  Embedding<double> init{Eigen::MatrixXd::Random(3, 2), std::nullopt};
  CHECK_THROWS(ratio_smacof(delta, init));
  delta << 0, 1, 1, 1, 0, 1, 1, 1, 0;
  init.coords(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(ratio_smacof(delta, init));
  Embedding<double> wrong{Eigen::MatrixXd::Zero(2, 2), std::nullopt};
  CHECK_THROWS(ratio_smacof(delta, wrong));
}

TEST_CASE("templates work in single precision") {
  Eigen::MatrixXf D(3, 3);
  D << 0, 1, 2, 1, 0, 1, 2, 1, 0;
  const auto e = classical_mds(D, 1);
  static_assert(std::is_same_v<decltype(e.coords)::Scalar, float>);
  CHECK(std::abs(e.coords(0, 0) - e.coords(2, 0)) == doctest::Approx(2.0f));
}
