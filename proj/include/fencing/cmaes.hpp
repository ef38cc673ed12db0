#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace fencing {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct CmaConfig {
  int population = 0;        // lambda; 0 selects 4 + floor(3 ln n)
  int parents = 0;           // mu; 0 selects lambda / 2
  double sigma0 = 0.5;
  int max_generations = 1000;
  double target_objective = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd lower;     // empty = unbounded
  Eigen::VectorXd upper;
  double penalty_weight = 1.0;  // quadratic penalty on the distance to the box
  std::uint64_t seed = 1;
  int threads = 1;           // > 1 evaluates a generation in parallel

  void validate(Eigen::Index n) const;
};

struct CmaGeneration {
  int generation = 0;
  double best_in_generation = 0.0;
  double best_ever = 0.0;
  double sigma = 0.0;
  long evaluations = 0;
};

struct CmaResult {
  Eigen::VectorXd best_x;  // always inside the box
  double best_f = 0.0;     // objective(best_x), no penalty
  int generations = 0;
  long evaluations = 0;
  std::vector<CmaGeneration> history;
};

/// (mu/mu_w, lambda)-CMA-ES with cumulative step-size adaptation and rank-one
/// plus rank-mu covariance updates. Out-of-box samples are evaluated at their
/// projection plus a quadratic penalty; the best-ever record tracks the raw
/// objective at projected points. Throws std::invalid_argument if the
/// objective is not finite at x0.
CmaResult cmaes_minimize(const Objective& objective, const Eigen::VectorXd& x0,
                         const CmaConfig& config);

}  // namespace fencing
