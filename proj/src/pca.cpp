#include "awpri/pca.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "awpri/errors.hpp"

namespace awpri {

namespace {

std::string column_name(const std::vector<std::string>& names, Eigen::Index j) {
  if (static_cast<std::size_t>(j) < names.size()) return names[static_cast<std::size_t>(j)];
  return "column " + std::to_string(j);
}

}  // namespace

Eigen::MatrixXd standardize(const Eigen::MatrixXd& data, const std::vector<std::string>& names) {
  if (data.rows() < 2) throw DataError("standardization needs at least two rows");
  const Eigen::RowVectorXd mean = data.colwise().mean();
  Eigen::MatrixXd z = data.rowwise() - mean;
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    const double sd = std::sqrt(z.col(j).squaredNorm() / static_cast<double>(data.rows() - 1));
    if (!(sd > 0.0)) throw DataError("constant " + column_name(names, j) + " cannot be standardized");
    z.col(j) /= sd;
  }
  return z;
}

PcaResult pca(const Eigen::MatrixXd& data, const std::vector<std::string>& names) {
  if (!data.allFinite()) throw DataError("PCA needs finite input");
  PcaResult res;
  const Eigen::MatrixXd z = standardize(data, names);
  res.means = data.colwise().mean();
  res.sds = ((data.rowwise() - res.means).colwise().squaredNorm() / static_cast<double>(data.rows() - 1))
                .cwiseSqrt();
  const Eigen::MatrixXd corr = z.transpose() * z / static_cast<double>(data.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr);
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const Eigen::Index p = corr.cols();
  res.eigenvalues = eig.eigenvalues().reverse();
  res.loadings = eig.eigenvectors().rowwise().reverse();
  for (Eigen::Index j = 0; j < p; ++j) {
    Eigen::Index arg = 0;
    res.loadings.col(j).cwiseAbs().maxCoeff(&arg);
    if (res.loadings(arg, j) < 0.0) res.loadings.col(j) *= -1.0;
  }
  res.explained_ratios = res.eigenvalues / res.eigenvalues.sum();
  res.scores = z * res.loadings;
  return res;
}

}  // namespace awpri
