#include "fencing/cmaes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fencing/common.hpp"
#include "fencing/parallel.hpp"

namespace fencing {

void CmaConfig::validate(Eigen::Index n) const {
  if (n < 1) throw std::invalid_argument("cmaes: dimension must be >= 1");
  if (!(sigma0 > 0.0)) throw std::invalid_argument("cmaes: sigma0 must be > 0");
  if (population != 0 && population < 4) throw std::invalid_argument("cmaes: population must be >= 4");
  if (lower.size() != upper.size() || (lower.size() != 0 && lower.size() != n)) {
    throw std::invalid_argument("cmaes: bounds must be empty or match the dimension");
  }
  if (lower.size() != 0 && (lower.array() > upper.array()).any()) {
    throw std::invalid_argument("cmaes: lower bound exceeds upper bound");
  }
}

CmaResult cmaes_minimize(const Objective& objective, const Eigen::VectorXd& x0,
                         const CmaConfig& config) {
  const Eigen::Index n = x0.size();
  config.validate(n);
  const double nd = static_cast<double>(n);
  const bool bounded = config.lower.size() == n;
  auto project = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return bounded ? Eigen::VectorXd(x.cwiseMax(config.lower).cwiseMin(config.upper)) : x;
  };

  const int lambda = config.population > 0 ? config.population
                                           : 4 + static_cast<int>(std::floor(3.0 * std::log(nd)));
  const int mu = config.parents > 0 ? std::min(config.parents, lambda) : lambda / 2;
  Eigen::VectorXd w(mu);
  for (int i = 0; i < mu; ++i) w[i] = std::log(mu + 0.5) - std::log(i + 1.0);
  w /= w.sum();
  const double mu_eff = 1.0 / w.squaredNorm();

  const double c_sigma = (mu_eff + 2.0) / (nd + mu_eff + 5.0);
  const double d_sigma =
      1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (nd + 1.0)) - 1.0) + c_sigma;
  const double c_c = (4.0 + mu_eff / nd) / (nd + 4.0 + 2.0 * mu_eff / nd);
  const double c_1 = 2.0 / ((nd + 1.3) * (nd + 1.3) + mu_eff);
  const double c_mu =
      std::min(1.0 - c_1, 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((nd + 2.0) * (nd + 2.0) + mu_eff));
  const double chi_n = std::sqrt(nd) * (1.0 - 1.0 / (4.0 * nd) + 1.0 / (21.0 * nd * nd));

  Eigen::VectorXd mean = project(x0);
  double sigma = config.sigma0;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd scales = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd p_sigma = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd p_c = Eigen::VectorXd::Zero(n);
  Rng rng(config.seed);

  CmaResult result;
  result.best_x = mean;
  result.best_f = objective(mean);
  result.evaluations = 1;
  if (!std::isfinite(result.best_f)) {
    throw std::invalid_argument("cmaes: objective is not finite at x0");
  }

  Eigen::MatrixXd y(n, lambda);
  std::vector<Eigen::VectorXd> candidates(static_cast<std::size_t>(lambda));
  std::vector<double> raw(static_cast<std::size_t>(lambda));
  std::vector<double> penalized(static_cast<std::size_t>(lambda));

  for (int gen = 0; gen < config.max_generations; ++gen) {
    if (result.best_f <= config.target_objective) break;

    for (int k = 0; k < lambda; ++k) {
      Eigen::VectorXd z(n);
      for (Eigen::Index i = 0; i < n; ++i) z[i] = standard_normal(rng);
      y.col(k) = basis * scales.asDiagonal() * z;
      candidates[static_cast<std::size_t>(k)] = mean + sigma * y.col(k);
    }
    parallel_for(lambda, config.threads, [&](int k) {
      const Eigen::VectorXd& x = candidates[static_cast<std::size_t>(k)];
      const Eigen::VectorXd xp = project(x);
      double f = objective(xp);
      if (!std::isfinite(f)) f = std::numeric_limits<double>::max();
      raw[static_cast<std::size_t>(k)] = f;
      penalized[static_cast<std::size_t>(k)] = f + config.penalty_weight * (x - xp).squaredNorm();
    });
    result.evaluations += lambda;

    std::vector<int> order(static_cast<std::size_t>(lambda));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return penalized[static_cast<std::size_t>(a)] < penalized[static_cast<std::size_t>(b)];
    });

    double gen_best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < lambda; ++k) {
      const double f = raw[static_cast<std::size_t>(k)];
      gen_best = std::min(gen_best, f);
      if (f < result.best_f) {
        result.best_f = f;
        result.best_x = project(candidates[static_cast<std::size_t>(k)]);
      }
    }

    Eigen::VectorXd y_w = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < mu; ++i) y_w += w[i] * y.col(order[static_cast<std::size_t>(i)]);
    mean += sigma * y_w;

    // C^{-1/2} y_w = B D^{-1} B^T y_w
    const Eigen::VectorXd c_inv_sqrt_y =
        basis * scales.cwiseInverse().asDiagonal() * basis.transpose() * y_w;
    p_sigma = (1.0 - c_sigma) * p_sigma + std::sqrt(c_sigma * (2.0 - c_sigma) * mu_eff) * c_inv_sqrt_y;
    const double ps_norm = p_sigma.norm();
    const double h_denom = std::sqrt(1.0 - std::pow(1.0 - c_sigma, 2.0 * (gen + 1)));
    const bool h_sigma = ps_norm / h_denom / chi_n < 1.4 + 2.0 / (nd + 1.0);
    p_c = (1.0 - c_c) * p_c + (h_sigma ? std::sqrt(c_c * (2.0 - c_c) * mu_eff) : 0.0) * y_w;

    Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < mu; ++i) {
      const auto yi = y.col(order[static_cast<std::size_t>(i)]);
      rank_mu.noalias() += w[i] * yi * yi.transpose();
    }
    const double delta_h = h_sigma ? 0.0 : c_c * (2.0 - c_c);
    cov = (1.0 - c_1 - c_mu) * cov + c_1 * (p_c * p_c.transpose() + delta_h * cov) + c_mu * rank_mu;
    cov = 0.5 * (cov + cov.transpose());
    sigma *= std::exp((c_sigma / d_sigma) * (ps_norm / chi_n - 1.0));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    basis = eig.eigenvectors();
    scales = eig.eigenvalues().cwiseMax(1e-300).cwiseSqrt();

    result.generations = gen + 1;
    result.history.push_back({gen, gen_best, result.best_f, sigma, result.evaluations});
    if (!(sigma * scales.maxCoeff() > 1e-300) || !std::isfinite(sigma)) break;
  }
  return result;
}

}  // namespace fencing
