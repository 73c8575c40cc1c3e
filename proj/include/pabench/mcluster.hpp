#pragma once

#include "pabench/pcluster.hpp"
#include "pabench/rng.hpp"
#include "pabench/types.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace pabench {

// ---------------------------------------------------------------------------
// Latent class analysis: mixture of locally independent Bernoulli variables.

inline constexpr double kThetaFloor = 1e-6;

struct LcaOptions {
  Index n_starts = 10;
  double tol = 1e-8;  // relative log-likelihood change
  Index max_iter = 1000;
};

struct LcaModel {
  Eigen::VectorXd weights;  // mixing proportions, length K
  Eigen::MatrixXd theta;    // K x m presence probabilities, clamped to [floor, 1 - floor]
  double loglik = -std::numeric_limits<double>::infinity();
  Index iterations = 0;
  std::vector<double> loglik_trace;

  Index n_components() const { return weights.size(); }
};

struct LcaFit {
  LcaModel model;
  Labels labels;  // label k + 1 is component k
};

/// EM from `n_starts` random Dirichlet(1) responsibility matrices; keeps
/// the start with the largest log-likelihood.
LcaFit fit_lca(const BinaryMatrix& data, Index k, Rng& rng, const LcaOptions& options = {});

/// Closed-form M-step for given responsibilities (n x K). Returns nullopt
/// when a component receives less than 1e-8 total responsibility.
std::optional<LcaModel> lca_m_step(const BinaryMatrix& data, const Eigen::MatrixXd& resp);

/// log(pi_k) + log P(x_i | k), n x K.
Eigen::MatrixXd lca_log_joint(const LcaModel& model, const BinaryMatrix& data);

double lca_loglik(const LcaModel& model, const BinaryMatrix& data);

/// Posterior class probabilities of one observation.
Eigen::VectorXd posterior(const LcaModel& model, const BinaryVector& x);

// ---------------------------------------------------------------------------
// Gaussian mixtures with constrained covariance families.

enum class CovarianceFamily { spherical_equal, spherical_varying, full_equal, full_varying };

inline constexpr std::array<CovarianceFamily, 4> kAllFamilies{
    CovarianceFamily::spherical_equal, CovarianceFamily::spherical_varying, CovarianceFamily::full_equal,
    CovarianceFamily::full_varying};

std::string_view family_name(CovarianceFamily family);

/// Free parameters: means, K - 1 proportions and the covariance terms.
Index free_parameters(CovarianceFamily family, Index k, Index p);

/// Larger is better: 2 loglik - nu log n.
inline double bic(double loglik, Index nu, Index n) {
  return 2.0 * loglik - static_cast<double>(nu) * std::log(static_cast<double>(n));
}

struct GmmOptions {
  Index n_starts = 10;
  double tol = 1e-8;
  Index max_iter = 500;
  double reg_scale = 1e-6;  // reg = reg_scale * trace(sample covariance) / p
  KMeansOptions init{10, 100};
};

template <typename Scalar>
struct GmmModel {
  CovarianceFamily family = CovarianceFamily::full_varying;
  VectorX<Scalar> weights;
  MatrixX<Scalar> means;  // K x p
  std::vector<MatrixX<Scalar>> covariances;
  Scalar loglik = -std::numeric_limits<Scalar>::infinity();
  Scalar bic = -std::numeric_limits<Scalar>::infinity();
  Index iterations = 0;
  std::vector<Scalar> loglik_trace;

  Index n_components() const { return weights.size(); }
  Index dim() const { return means.cols(); }
};

template <typename Scalar>
struct GmmFit {
  GmmModel<Scalar> model;              // family with the largest BIC
  Labels labels;                       // label k + 1 is component k
  std::vector<GmmModel<Scalar>> candidates;  // best start per family, in menu order
};

namespace detail {

inline constexpr double kCollapseMass = 1e-8;

template <typename Scalar>
VectorX<Scalar> row_logsumexp(const MatrixX<Scalar>& a) {
  VectorX<Scalar> out(a.rows());
  for (Index i = 0; i < a.rows(); ++i) {
    const Scalar mx = a.row(i).maxCoeff();
    out[i] = std::isinf(mx) ? mx : mx + std::log((a.row(i).array() - mx).exp().sum());
  }
  return out;
}

/// Log density of N(mean, cov) at every row of X.
template <typename DerivedX, typename Scalar>
VectorX<Scalar> gaussian_log_density(const Eigen::MatrixBase<DerivedX>& X, const VectorX<Scalar>& mean,
                                     const MatrixX<Scalar>& cov) {
  const Index p = X.cols();
  Eigen::LLT<MatrixX<Scalar>> llt(cov);
  if (llt.info() != Eigen::Success) throw std::runtime_error("gaussian_log_density: covariance not positive definite");
  MatrixX<Scalar> centered = (X.rowwise() - mean.transpose()).transpose();
  llt.matrixL().solveInPlace(centered);
  const Scalar log_det = Scalar(2) * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const Scalar c = Scalar(p) * std::log(Scalar(2) * std::numbers::pi_v<Scalar>) + log_det;
  return (Scalar(-0.5) * (centered.colwise().squaredNorm().array() + c)).matrix().transpose();
}

template <typename DerivedX, typename Scalar>
MatrixX<Scalar> gmm_log_joint(const GmmModel<Scalar>& model, const Eigen::MatrixBase<DerivedX>& X) {
  const Index k = model.n_components();
  MatrixX<Scalar> out(X.rows(), k);
  for (Index c = 0; c < k; ++c)
    out.col(c) = gaussian_log_density(X, VectorX<Scalar>(model.means.row(c).transpose()),
                                      model.covariances[static_cast<std::size_t>(c)])
                     .array() +
                 std::log(model.weights[c]);
  return out;
}

/// Constrained M-step; false when a component collapses.
template <typename DerivedX, typename Scalar>
bool gmm_m_step(const Eigen::MatrixBase<DerivedX>& X, const MatrixX<Scalar>& resp, CovarianceFamily family,
                Scalar reg, GmmModel<Scalar>& model) {
  const Index n = X.rows();
  const Index p = X.cols();
  const Index k = resp.cols();
  const VectorX<Scalar> mass = resp.colwise().sum().transpose();
  if ((mass.array() < Scalar(kCollapseMass)).any()) return false;

  model.family = family;
  model.weights = mass / Scalar(n);
  model.means = (resp.transpose() * X).array().colwise() / mass.array();

  std::vector<MatrixX<Scalar>> scatter(static_cast<std::size_t>(k));
  for (Index c = 0; c < k; ++c) {
    const MatrixX<Scalar> centered = X.rowwise() - model.means.row(c);
    scatter[c] = centered.transpose() * resp.col(c).asDiagonal() * centered;
  }
  const MatrixX<Scalar> I = MatrixX<Scalar>::Identity(p, p);
  model.covariances.assign(static_cast<std::size_t>(k), MatrixX<Scalar>());
  switch (family) {
    case CovarianceFamily::full_varying:
      for (Index c = 0; c < k; ++c) model.covariances[c] = scatter[c] / mass[c] + reg * I;
      break;
    case CovarianceFamily::full_equal: {
      MatrixX<Scalar> pooled = MatrixX<Scalar>::Zero(p, p);
      for (const auto& s : scatter) pooled += s;
      pooled = pooled / Scalar(n) + reg * I;
      for (auto& cov : model.covariances) cov = pooled;
      break;
    }
    case CovarianceFamily::spherical_varying:
      for (Index c = 0; c < k; ++c) model.covariances[c] = (scatter[c].trace() / (mass[c] * Scalar(p)) + reg) * I;
      break;
    case CovarianceFamily::spherical_equal: {
      Scalar total(0);
      for (const auto& s : scatter) total += s.trace();
      const MatrixX<Scalar> cov = (total / (Scalar(n) * Scalar(p)) + reg) * I;
      for (auto& c : model.covariances) c = cov;
      break;
    }
  }
  return true;
}

template <typename Scalar>
Labels argmax_labels(const MatrixX<Scalar>& scores) {
  Labels labels(scores.rows());
  for (Index i = 0; i < scores.rows(); ++i) {
    Index best = 0;
    for (Index c = 1; c < scores.cols(); ++c)
      if (scores(i, c) > scores(i, best)) best = c;
    labels[i] = static_cast<int>(best) + 1;
  }
  return labels;
}

template <typename DerivedX>
typename DerivedX::Scalar covariance_regularization(const Eigen::MatrixBase<DerivedX>& X, double reg_scale) {
  using Scalar = typename DerivedX::Scalar;
  const MatrixX<Scalar> centered = X.rowwise() - X.colwise().mean();
  const Scalar trace = centered.squaredNorm() / Scalar(X.rows());
  if (!(trace > Scalar(0))) throw std::invalid_argument("fit_gmm: data have zero variance");
  return Scalar(reg_scale) * trace / Scalar(X.cols());
}

}  // namespace detail

/// Mixture density sum_k pi_k phi_k(x) on the log scale, one value per row.
template <typename DerivedX, typename Scalar>
VectorX<Scalar> log_density(const GmmModel<Scalar>& model, const Eigen::MatrixBase<DerivedX>& X) {
  return detail::row_logsumexp(detail::gmm_log_joint(model, X));
}

/// Posterior component probabilities of one observation.
template <typename Scalar, typename DerivedX>
VectorX<Scalar> posterior(const GmmModel<Scalar>& model, const Eigen::MatrixBase<DerivedX>& x) {
  const MatrixX<Scalar> row = x.derived().reshaped(1, x.size()).template cast<Scalar>();
  const MatrixX<Scalar> lj = detail::gmm_log_joint(model, row);
  const Scalar lse = detail::row_logsumexp(lj)[0];
  return (lj.row(0).array() - lse).exp().matrix().transpose();
}

/// EM for one covariance family. Start 0 is seeded from K-means, later
/// starts from K random data points; a start whose components collapse is
/// redrawn up to four times.
template <typename Derived>
GmmModel<typename Derived::Scalar> fit_gmm_family(const Eigen::MatrixBase<Derived>& X, Index k, CovarianceFamily family,
                                                  Rng& rng, const GmmOptions& options = {}) {
  using Scalar = typename Derived::Scalar;
  const Index n = X.rows();
  const Index p = X.cols();
  if (k < 1) throw std::invalid_argument("fit_gmm: K must be positive");
  if (n <= k * p) throw std::invalid_argument("fit_gmm: need n > K * p");
  const Scalar reg = detail::covariance_regularization(X, options.reg_scale);

  GmmModel<Scalar> best;
  bool any = false;
  constexpr int kAttempts = 5;
  for (Index start = 0; start < options.n_starts; ++start) {
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
      Labels hard(n);
      if (start == 0 && attempt == 0) {
        hard = kmeans(X, k, rng, options.init).labels.array() - 1;
      } else {
        MatrixX<Scalar> centers(k, p);
        const auto seeds = detail::sample_indices(n, k, rng);
        for (Index c = 0; c < k; ++c) centers.row(c) = X.row(seeds[static_cast<std::size_t>(c)]);
        VectorX<Scalar> dist(n);
        detail::assign_nearest(X, centers, hard, dist);
      }
      MatrixX<Scalar> resp = MatrixX<Scalar>::Zero(n, k);
      for (Index i = 0; i < n; ++i) resp(i, hard[i]) = Scalar(1);

      GmmModel<Scalar> model;
      if (!detail::gmm_m_step(X, resp, family, reg, model)) continue;
      bool collapsed = false;
      Scalar previous = -std::numeric_limits<Scalar>::infinity();
      for (Index it = 0; it < options.max_iter; ++it) {
        const MatrixX<Scalar> lj = detail::gmm_log_joint(model, X);
        const VectorX<Scalar> lse = detail::row_logsumexp(lj);
        const Scalar ll = lse.sum();
        model.loglik_trace.push_back(ll);
        model.loglik = ll;
        model.iterations = it + 1;
        resp = (lj.colwise() - lse).array().exp();
        if (it > 0 && std::abs(ll - previous) < Scalar(options.tol) * std::abs(ll)) break;
        if (it + 1 == options.max_iter) break;
        previous = ll;
        if (!detail::gmm_m_step(X, resp, family, reg, model)) {
          collapsed = true;
          break;
        }
      }
      if (collapsed) continue;
      if (!any || model.loglik > best.loglik) {
        best = std::move(model);
        any = true;
      }
      break;
    }
  }
  if (!any) throw std::runtime_error("fit_gmm: every EM run collapsed");
  best.bic = Scalar(bic(double(best.loglik), free_parameters(family, k, p), n));
  return best;
}

/// Fits every family in `families` and keeps the one with the largest BIC
/// (earlier family on ties). Labels are posterior argmax, lowest k on ties.
template <typename Derived>
GmmFit<typename Derived::Scalar> fit_gmm(const Eigen::MatrixBase<Derived>& X, Index k, Rng& rng,
                                         const GmmOptions& options = {},
                                         std::span<const CovarianceFamily> families = kAllFamilies) {
  using Scalar = typename Derived::Scalar;
  if (families.empty()) throw std::invalid_argument("fit_gmm: no covariance family selected");
  GmmFit<Scalar> fit;
  std::size_t best = 0;
  for (auto family : families) {
    fit.candidates.push_back(fit_gmm_family(X, k, family, rng, options));
    if (fit.candidates.back().bic > fit.candidates[best].bic) best = fit.candidates.size() - 1;
  }
  fit.model = fit.candidates[best];
  fit.labels = detail::argmax_labels(detail::gmm_log_joint(fit.model, X));
  return fit;
}

}  // namespace pabench
