#include "pabench/dist.hpp"

namespace pabench {

DistanceMatrix distance_matrix(const BinaryMatrix& data, Measure measure) {
  const Index n = data.rows();
  const Index m = data.cols();
  // Joint presences come out of one product; all counts are small integers
  // and exact in double precision.
  const Eigen::MatrixXd X = data.cast<double>();
  const Eigen::MatrixXd joint = X * X.transpose();
  const Eigen::VectorXd ranges = X.rowwise().sum();

  DistanceMatrix D = DistanceMatrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      double d;
      if (measure == Measure::jaccard) {
        const double either = ranges[i] + ranges[j] - joint(i, j);
        if (either == 0.0) throw std::domain_error("Jaccard undefined for empty union");
        d = 1.0 - joint(i, j) / either;
      } else {
        d = (ranges[i] + ranges[j] - 2.0 * joint(i, j)) / static_cast<double>(m);
      }
      D(i, j) = d;
      D(j, i) = d;
    }
  }
  return D;
}

void check_distance_matrix(const DistanceMatrix& D) {
  if (D.rows() != D.cols()) throw std::invalid_argument("distance matrix must be square");
  if (D.size() == 0) throw std::invalid_argument("distance matrix is empty");
  if (!D.allFinite()) throw std::invalid_argument("distance matrix has non-finite entries");
  if ((D.array() < 0.0).any()) throw std::invalid_argument("distance matrix has negative entries");
  if (D.diagonal().cwiseAbs().maxCoeff() > 0.0) throw std::invalid_argument("distance matrix diagonal must be zero");
  if ((D - D.transpose()).cwiseAbs().maxCoeff() > 0.0)
    throw std::invalid_argument("distance matrix must be symmetric");
}

}  // namespace pabench
