#include "fencing/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace fencing {

double PcaModel::retained_ratio() const {
  return explained_ratio.head(components.rows()).sum();
}

Eigen::MatrixXd PcaModel::standardize(const Eigen::MatrixXd& rows) const {
  return (rows.rowwise() - means.transpose()).array().rowwise() / stds.transpose().array();
}

Eigen::MatrixXd PcaModel::project(const Eigen::MatrixXd& rows) const {
  return standardize(rows) * components.transpose();
}

Eigen::MatrixXd PcaModel::reconstruct_standardized(const Eigen::MatrixXd& projected) const {
  return projected * components;
}

PcaFit pca_fit(const Eigen::MatrixXd& rows, int k) {
  const Eigen::Index n = rows.rows();
  const Eigen::Index d = rows.cols();
  if (k < 1 || k > d) throw std::invalid_argument("pca_fit: k must be in [1, feature count]");
  if (n < k + 1) throw std::invalid_argument("pca_fit: need at least k + 1 rows");
  if (!rows.allFinite()) throw std::invalid_argument("pca_fit: non-finite input");

  PcaFit fit;
  PcaModel& m = fit.model;
  m.means = rows.colwise().mean().transpose();
  const Eigen::MatrixXd centered = rows.rowwise() - m.means.transpose();
  m.stds = (centered.array().square().colwise().sum() / static_cast<double>(n)).sqrt().transpose();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (m.stds[j] < 1e-12 * std::max(1.0, std::abs(m.means[j]))) m.stds[j] = 1.0;
  }
  const Eigen::MatrixXd z = m.standardize(rows);
  const Eigen::MatrixXd cov = z.transpose() * z / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw std::runtime_error("pca_fit: eigensolver failed");
  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return eig.eigenvalues()[a] > eig.eigenvalues()[b];
  });

  m.eigenvalues.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    m.eigenvalues[i] = std::max(0.0, eig.eigenvalues()[order[static_cast<std::size_t>(i)]]);
  }
  const double total = m.eigenvalues.sum();
  m.explained_ratio = total > 0.0 ? Eigen::VectorXd(m.eigenvalues / total)
                                  : Eigen::VectorXd::Zero(d);
  m.components.resize(k, d);
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd v = eig.eigenvectors().col(order[static_cast<std::size_t>(i)]);
    // Sign convention: largest-magnitude entry positive.
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0.0) v = -v;
    m.components.row(i) = v.transpose();
  }
  fit.projected = z * m.components.transpose();
  return fit;
}

}  // namespace fencing
