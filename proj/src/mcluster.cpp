#include "pabench/mcluster.hpp"

namespace pabench {

std::string_view family_name(CovarianceFamily family) {
  switch (family) {
    case CovarianceFamily::spherical_equal: return "spherical-equal";
    case CovarianceFamily::spherical_varying: return "spherical-varying";
    case CovarianceFamily::full_equal: return "full-equal";
    case CovarianceFamily::full_varying: return "full-varying";
  }
  return "unknown";
}

Index free_parameters(CovarianceFamily family, Index k, Index p) {
  const Index base = k * p + (k - 1);
  const Index full = p * (p + 1) / 2;
  switch (family) {
    case CovarianceFamily::spherical_equal: return base + 1;
    case CovarianceFamily::spherical_varying: return base + k;
    case CovarianceFamily::full_equal: return base + full;
    case CovarianceFamily::full_varying: return base + k * full;
  }
  return base;
}

std::optional<LcaModel> lca_m_step(const BinaryMatrix& data, const Eigen::MatrixXd& resp) {
  const Eigen::VectorXd mass = resp.colwise().sum().transpose();
  if ((mass.array() < detail::kCollapseMass).any()) return std::nullopt;
  LcaModel model;
  model.weights = mass / static_cast<double>(data.rows());
  const Eigen::MatrixXd X = data.cast<double>();
  model.theta = ((resp.transpose() * X).array().colwise() / mass.array())
                    .cwiseMax(kThetaFloor)
                    .cwiseMin(1.0 - kThetaFloor);
  return model;
}

Eigen::MatrixXd lca_log_joint(const LcaModel& model, const BinaryMatrix& data) {
  const Eigen::MatrixXd X = data.cast<double>();
  const Eigen::MatrixXd log_on = model.theta.array().log();
  const Eigen::MatrixXd log_off = (1.0 - model.theta.array()).log();
  // sum_j x_ij log theta_kj + (1 - x_ij) log(1 - theta_kj)
  Eigen::MatrixXd out = X * (log_on - log_off).transpose();
  out.rowwise() += (log_off.rowwise().sum() + model.weights.array().log().matrix()).transpose();
  return out;
}

double lca_loglik(const LcaModel& model, const BinaryMatrix& data) {
  return detail::row_logsumexp<double>(lca_log_joint(model, data)).sum();
}

Eigen::VectorXd posterior(const LcaModel& model, const BinaryVector& x) {
  if (x.size() != model.theta.cols()) throw std::invalid_argument("posterior: observation has the wrong length");
  const BinaryMatrix row = x.transpose();
  const Eigen::MatrixXd lj = lca_log_joint(model, row);
  const double lse = detail::row_logsumexp<double>(lj)[0];
  return (lj.row(0).array() - lse).exp().matrix().transpose();
}

LcaFit fit_lca(const BinaryMatrix& data, Index k, Rng& rng, const LcaOptions& options) {
  const Index n = data.rows();
  if (k < 1) throw std::invalid_argument("fit_lca: K must be positive");
  if (k > n) throw std::invalid_argument("fit_lca: K exceeds the number of observations");

  LcaModel best;
  bool any = false;
  constexpr int kAttempts = 5;
  for (Index start = 0; start < options.n_starts; ++start) {
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
      // Symmetric Dirichlet(1) rows: normalized standard exponentials.
      Eigen::MatrixXd resp(n, k);
      for (Index i = 0; i < n; ++i) {
        for (Index c = 0; c < k; ++c) resp(i, c) = rng.exponential();
        resp.row(i) /= resp.row(i).sum();
      }
      auto model = lca_m_step(data, resp);
      if (!model) continue;

      bool collapsed = false;
      double previous = -std::numeric_limits<double>::infinity();
      for (Index it = 0; it < options.max_iter; ++it) {
        const Eigen::MatrixXd lj = lca_log_joint(*model, data);
        const Eigen::VectorXd lse = detail::row_logsumexp<double>(lj);
        const double ll = lse.sum();
        model->loglik_trace.push_back(ll);
        model->loglik = ll;
        model->iterations = it + 1;
        resp = (lj.colwise() - lse).array().exp();
        if (it > 0 && std::abs(ll - previous) < options.tol * std::abs(ll)) break;
        if (it + 1 == options.max_iter) break;
        previous = ll;
        auto trace = std::move(model->loglik_trace);
        model = lca_m_step(data, resp);
        if (!model) {
          collapsed = true;
          break;
        }
        model->loglik_trace = std::move(trace);
      }
      if (collapsed) continue;
      if (!any || model->loglik > best.loglik) {
        best = std::move(*model);
        any = true;
      }
      break;
    }
  }
  if (!any) throw std::runtime_error("fit_lca: every EM run collapsed");

  LcaFit fit;
  fit.labels = detail::argmax_labels<double>(lca_log_joint(best, data));
  fit.model = std::move(best);
  return fit;
}

}  // namespace pabench
