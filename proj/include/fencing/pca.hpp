#pragma once

#include <Eigen/Dense>

namespace fencing {

/// Principal components of z-scored features.
struct PcaModel {
  Eigen::VectorXd means;
  Eigen::VectorXd stds;             // population std; 1 where a feature is constant
  Eigen::MatrixXd components;       // k x d, orthonormal rows, by decreasing variance
  Eigen::VectorXd explained_ratio;  // all d ratios, non-increasing, sum <= 1
  Eigen::VectorXd eigenvalues;      // all d, non-increasing

  int retained() const { return static_cast<int>(components.rows()); }
  double retained_ratio() const;
  Eigen::MatrixXd standardize(const Eigen::MatrixXd& rows) const;
  /// rows x k coordinates of the standardized rows.
  Eigen::MatrixXd project(const Eigen::MatrixXd& rows) const;
  /// Back-projection of projected coordinates into standardized space.
  Eigen::MatrixXd reconstruct_standardized(const Eigen::MatrixXd& projected) const;
};

struct PcaFit {
  PcaModel model;
  Eigen::MatrixXd projected;  // rows x k
};

/// Eigendecomposition of the covariance of the standardized rows, keeping the
/// top k components. Needs at least k + 1 rows. Rank deficiency is not an
/// error: the missing variance simply shows up as zero ratios.
PcaFit pca_fit(const Eigen::MatrixXd& rows, int k);

}  // namespace fencing
