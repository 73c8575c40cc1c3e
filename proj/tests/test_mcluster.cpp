#include "oracles.hpp"
#include "pabench/eval.hpp"
#include "pabench/mcluster.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

using namespace pabench;

namespace {

// Two noisy presence patterns: rows of block g are 1 with probability 0.95
// on the cells of pattern g and 0.05 elsewhere.
BinaryMatrix two_blocks(Index n, Index m, Rng& rng, Labels& truth) {
  BinaryMatrix X(n, m);
  truth.resize(n);
  for (Index i = 0; i < n; ++i) {
    const int g = i < n / 2 ? 0 : 1;
    truth[i] = g + 1;
    for (Index j = 0; j < m; ++j) {
      const bool on = (j < m / 2) == (g == 0);
      X(i, j) = rng.uniform() < (on ? 0.95 : 0.05);
    }
  }
  return X;
}

double normal_density(const Eigen::VectorXd& x, const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
  const Eigen::VectorXd d = x - mean;
  const double q = d.dot(cov.inverse() * d);
  const double norm = std::pow(2.0 * std::numbers::pi, double(x.size()) / 2.0) * std::sqrt(cov.determinant());
  return std::exp(-0.5 * q) / norm;
}

Eigen::MatrixXd blobs(Index per, Rng& rng, Labels& truth) {
  Eigen::MatrixXd X = 0.3 * oracle::gaussian_points(3 * per, 2, rng);
  truth.resize(3 * per);
  const double centers[3][2] = {{0, 0}, {5, 0}, {0, 5}};
  for (Index i = 0; i < 3 * per; ++i) {
    const Index g = i / per;
    X(i, 0) += centers[g][0];
    X(i, 1) += centers[g][1];
    truth[i] = static_cast<int>(g) + 1;
  }
  return X;
}

}  // namespace

TEST_CASE("LCA with one class is the clamped column mean") {
  BinaryMatrix X(2, 2);
  X << 1, 0, 1, 1;
  Rng rng(61);
  const auto fit = fit_lca(X, 1, rng);
  CHECK(fit.model.weights[0] == doctest::Approx(1.0));
  CHECK(fit.model.theta(0, 0) == 1.0 - kThetaFloor);
  CHECK(fit.model.theta(0, 1) == doctest::Approx(0.5));
  CHECK(fit.labels == Labels::Ones(2));
}

TEST_CASE("LCA separates two noisy blocks") {
  Rng rng(62);
  Labels truth;
  const auto X = two_blocks(200, 20, rng, truth);
  const auto fit = fit_lca(X, 2, rng);
  CHECK(adjusted_rand_index(fit.labels, truth) == 1.0);
  CHECK(fit.model.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((fit.model.theta.array() >= kThetaFloor).all());
  CHECK((fit.model.theta.array() <= 1.0 - kThetaFloor).all());
  CHECK(fit.model.loglik == doctest::Approx(lca_loglik(fit.model, X)).epsilon(1e-10));

  Rng one(63);
  const auto single = fit_lca(X, 1, one);
  CHECK(fit.model.loglik >= single.model.loglik);
}

TEST_CASE("LCA log-likelihood never decreases") {
  Rng rng(64);
  const auto X = oracle::random_binary(120, 15, 0.3, rng);
  for (Index k : {2, 3, 4}) {
    const auto fit = fit_lca(X, k, rng, {3, 1e-10, 1000});
    const auto& h = fit.model.loglik_trace;
    REQUIRE(h.size() >= 2);
    for (std::size_t t = 1; t < h.size(); ++t) CHECK(h[t] >= h[t - 1] - 1e-9 * std::abs(h[t - 1]));
  }
  CHECK_THROWS(fit_lca(X, 121, rng));
  CHECK_THROWS(fit_lca(X, 0, rng));
}

TEST_CASE("LCA posterior matches direct Bernoulli evaluation") {
  Rng rng(65);
  const auto X = oracle::random_binary(80, 10, 0.4, rng);
  const auto fit = fit_lca(X, 3, rng);
  const auto& m = fit.model;
  for (Index i = 0; i < 10; ++i) {
    const BinaryVector x = X.row(i).transpose();
    Eigen::VectorXd joint(3);
    for (Index k = 0; k < 3; ++k) {
      double p = m.weights[k];
      for (Index j = 0; j < 10; ++j) p *= x[j] ? m.theta(k, j) : 1.0 - m.theta(k, j);
      joint[k] = p;
    }
    joint /= joint.sum();
    const auto post = posterior(m, x);
    CHECK(post.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((post - joint).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("BIC arithmetic and parameter counts") {
  CHECK(bic(-100.0, 5, 100) == doctest::Approx(-223.0259).epsilon(1e-6));
  CHECK(free_parameters(CovarianceFamily::spherical_equal, 3, 2) == 6 + 2 + 1);
  CHECK(free_parameters(CovarianceFamily::spherical_varying, 3, 2) == 6 + 2 + 3);
  CHECK(free_parameters(CovarianceFamily::full_equal, 3, 2) == 6 + 2 + 3);
  CHECK(free_parameters(CovarianceFamily::full_varying, 3, 3) == 9 + 2 + 18);
}

TEST_CASE("GMM with one component is the sample moment fit") {
  Rng rng(66);
  const auto X = oracle::random_points(50, 2, rng);
  const Eigen::RowVectorXd mean = X.colwise().mean();
  const Eigen::MatrixXd centered = X.rowwise() - mean;
  const Eigen::MatrixXd S = centered.transpose() * centered / 50.0;
  const double reg = 1e-6 * S.trace() / 2.0;
  for (CovarianceFamily family : kAllFamilies) {
    const auto model = fit_gmm_family(X, 1, family, rng);
    CHECK(model.means.row(0).isApprox(mean, 1e-12));
    CHECK(model.weights[0] == doctest::Approx(1.0));
    const bool spherical = family == CovarianceFamily::spherical_equal || family == CovarianceFamily::spherical_varying;
    const Eigen::MatrixXd want = spherical ? Eigen::MatrixXd((S.trace() / 2.0 + reg) * Eigen::MatrixXd::Identity(2, 2))
                                           : Eigen::MatrixXd(S + reg * Eigen::MatrixXd::Identity(2, 2));
    CHECK(model.covariances[0].isApprox(want, 1e-10));
  }
}

TEST_CASE("GMM recovers separated blobs and keeps EM monotone") {
  Rng rng(67);
  Labels truth;
  const auto X = blobs(40, rng, truth);
  const auto fit = fit_gmm(X, 3, rng);
  CHECK(adjusted_rand_index(fit.labels, truth) == 1.0);
  REQUIRE(fit.candidates.size() == 4);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : fit.candidates) {
    best = std::max(best, c.bic);
    CHECK(c.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.bic == doctest::Approx(bic(c.loglik, free_parameters(c.family, 3, 2), 120)).epsilon(1e-12));
    for (const auto& S : c.covariances) {
      CHECK(S.isApprox(S.transpose()));
      CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(S).eigenvalues().minCoeff() > 0.0);
    }
    const auto& h = c.loglik_trace;
    for (std::size_t t = 1; t < h.size(); ++t) CHECK(h[t] >= h[t - 1] - 1e-9 * std::abs(h[t - 1]));
  }
  CHECK(fit.model.bic == best);
}

TEST_CASE("GMM posterior matches direct density evaluation") {
  Rng rng(68);
  Labels truth;
  const auto X = blobs(30, rng, truth);
  const auto fit = fit_gmm(X, 3, rng);
  const auto& m = fit.model;
  for (Index i = 0; i < 90; i += 7) {
    const Eigen::VectorXd x = X.row(i).transpose();
    Eigen::VectorXd joint(3);
    for (Index k = 0; k < 3; ++k) joint[k] = m.weights[k] * normal_density(x, m.means.row(k).transpose(), m.covariances[static_cast<std::size_t>(k)]);
    const double total = joint.sum();
    const auto post = posterior(m, x);
    CHECK(post.sum() == doctest::Approx(1.0).epsilon(1e-12));
    for (Index k = 0; k < 3; ++k) CHECK(post[k] == doctest::Approx(joint[k] / total).epsilon(1e-9).scale(1e-300));
    CHECK(log_density(m, X.row(i))[0] == doctest::Approx(std::log(total)).epsilon(1e-10));
  }
}

TEST_CASE("diagonal Gaussian density is a product of univariate normals") {
  GmmModel<double> m;
  m.family = CovarianceFamily::full_varying;
  m.weights = Eigen::VectorXd::Ones(1);
  m.means = Eigen::MatrixXd(1, 2);
  m.means << 0.3, -1.2;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
  cov(0, 0) = 0.7;
  cov(1, 1) = 2.5;
  m.covariances = {cov};
  auto univariate = [](double x, double mu, double var) {
    return std::exp(-0.5 * (x - mu) * (x - mu) / var) / std::sqrt(2.0 * std::numbers::pi * var);
  };
  Rng rng(69);
  const auto Q = oracle::random_points(20, 2, rng, 3.0);
  const auto ld = log_density(m, Q);
  for (Index i = 0; i < 20; ++i) {
    const double want = univariate(Q(i, 0), 0.3, 0.7) * univariate(Q(i, 1), -1.2, 2.5);
    CHECK(std::abs(std::exp(ld[i]) - want) < 1e-12);
  }
}

TEST_CASE("symmetric components give a uniform posterior and the lowest label") {
  GmmModel<double> m;
  m.weights = Eigen::VectorXd::Constant(2, 0.5);
  m.means = Eigen::MatrixXd(2, 2);
  m.means << -1, 0, 1, 0;
  m.covariances = {Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2)};
  Eigen::VectorXd origin = Eigen::VectorXd::Zero(2);
  const auto post = posterior(m, origin);
  CHECK(post[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(post[1] == doctest::Approx(0.5).epsilon(1e-15));
  const Eigen::MatrixXd scores = detail::gmm_log_joint(m, origin.transpose());
  CHECK(detail::argmax_labels(scores)[0] == 1);

  GmmModel<double> one;
  one.weights = Eigen::VectorXd::Ones(1);
  one.means = Eigen::MatrixXd::Zero(1, 2);
  one.covariances = {Eigen::MatrixXd::Identity(2, 2)};
  CHECK(posterior(one, origin)[0] == 1.0);
}

TEST_CASE("GMM input checks") {
  Rng rng(70);
  const auto X = oracle::random_points(6, 2, rng);
  CHECK_THROWS(fit_gmm(X, 3, rng));  // n must exceed K * p
  CHECK_THROWS(fit_gmm(Eigen::MatrixXd::Ones(20, 2), 2, rng));
}
