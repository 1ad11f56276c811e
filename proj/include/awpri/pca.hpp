#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace awpri {

struct PcaResult {
  Eigen::VectorXd eigenvalues;       // descending
  Eigen::VectorXd explained_ratios;  // eigenvalues / p
  Eigen::MatrixXd loadings;          // p x p, column j = component j
  Eigen::MatrixXd scores;            // n x p
  Eigen::RowVectorXd means;
  Eigen::RowVectorXd sds;            // sample sd used for standardization
};

/// Column z-score (mean 0, sample sd 1).
Eigen::MatrixXd standardize(const Eigen::MatrixXd& data, const std::vector<std::string>& names = {});

/// PCA of the correlation matrix. Each component is signed so that its
/// largest-magnitude loading is positive.
PcaResult pca(const Eigen::MatrixXd& data, const std::vector<std::string>& names = {});

}  // namespace awpri
