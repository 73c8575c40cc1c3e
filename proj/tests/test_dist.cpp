#include "oracles.hpp"
#include "pabench/dist.hpp"

#include <doctest.h>

#include <numeric>

using namespace pabench;

namespace {

BinaryVector bits(std::initializer_list<int> v) {
  BinaryVector x(static_cast<Index>(v.size()));
  Index i = 0;
  for (int b : v) x[i++] = static_cast<std::uint8_t>(b);
  return x;
}

}  // namespace

TEST_CASE("jaccard examples") {
  CHECK(jaccard_distance(bits({1, 1, 0, 0}), bits({1, 0, 1, 0})) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(jaccard_distance(bits({1, 0, 1}), bits({1, 0, 1})) == 0.0);
  CHECK(jaccard_distance(bits({1, 0}), bits({0, 1})) == 1.0);
  CHECK_THROWS_AS(jaccard_distance(bits({0, 0}), bits({0, 0})), std::domain_error);
  CHECK_THROWS_AS(jaccard_distance(bits({1, 0}), bits({1, 0, 0})), std::invalid_argument);
}

TEST_CASE("simple matching example") {
  CHECK(simple_matching_distance(bits({1, 1, 0, 0}), bits({1, 0, 1, 0})) == 0.5);
  CHECK(simple_matching_distance(bits({0, 0}), bits({0, 0})) == 0.0);
}

TEST_CASE("jaccard matrix agrees with the pairwise definition") {
  Rng rng(3);
  BinaryMatrix X = oracle::random_binary(10, 20, 0.4, rng);
  for (Index i = 0; i < X.rows(); ++i) X(i, i) = 1;  // no empty rows
  const auto D = distance_matrix(X, Measure::jaccard);
  for (Index i = 0; i < 10; ++i)
    for (Index j = 0; j < 10; ++j) {
      int both = 0, either = 0;
      for (Index c = 0; c < 20; ++c) {
        both += X(i, c) && X(j, c);
        either += X(i, c) || X(j, c);
      }
      CHECK(D(i, j) == doctest::Approx(1.0 - double(both) / double(either)).epsilon(1e-15));
    }
  check_distance_matrix(D);
}

TEST_CASE("jaccard matrix is a metric and ignores column order") {
  Rng rng(4);
  BinaryMatrix X = oracle::random_binary(25, 30, 0.3, rng);
  for (Index i = 0; i < X.rows(); ++i) X(i, i) = 1;
  const auto D = distance_matrix(X, Measure::jaccard);
  CHECK(D.diagonal().isZero(0.0));
  CHECK(D == D.transpose());
  CHECK((D.array() >= 0.0).all());
  CHECK((D.array() <= 1.0).all());
  for (Index i = 0; i < 25; ++i)
    for (Index j = 0; j < 25; ++j)
      for (Index k = 0; k < 25; ++k) CHECK(D(i, k) <= D(i, j) + D(j, k) + 1e-12);

  std::vector<Index> perm(30);
  std::iota(perm.begin(), perm.end(), Index{0});
  std::reverse(perm.begin(), perm.end());
  std::swap(perm[3], perm[17]);
  BinaryMatrix Y(25, 30);
  for (Index c = 0; c < 30; ++c) Y.col(c) = X.col(perm[static_cast<std::size_t>(c)]);
  CHECK(distance_matrix(Y, Measure::jaccard) == D);
}

TEST_CASE("distance matrix errors") {
  BinaryMatrix X(2, 3);
  X << 0, 0, 0, 0, 0, 0;
  CHECK_THROWS_AS(distance_matrix(X, Measure::jaccard), std::domain_error);
  CHECK_NOTHROW(distance_matrix(X, Measure::simple_matching));

  DistanceMatrix bad(2, 2);
  bad << 0, 1, 0.5, 0;
  CHECK_THROWS(check_distance_matrix(bad));
  bad << 0, -1, -1, 0;
  CHECK_THROWS(check_distance_matrix(bad));
  bad << 1, 1, 1, 0;
  CHECK_THROWS(check_distance_matrix(bad));
  CHECK_THROWS(check_distance_matrix(DistanceMatrix(2, 3)));
}
