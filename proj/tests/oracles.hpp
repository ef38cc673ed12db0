#pragma once

// Independent reference implementations used as test oracles. They share no
// code with the library beyond the plain data types.

#include <vector>

#include "fencing/trajectory_log.hpp"

namespace oracle {

using fencing::Vec3;

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b);

/// Minimum over the interior critical point of |a(s) - b(t)|^2 (when it lies
/// in the unit square) and the four edge distances.
double segment_distance(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1);

/// Scoring rules over logged geometry: per tick, +1 / -10 for the antagonist
/// in the target, +10 each time the protagonist completes a full camping
/// streak. Returns per-tick deltas (tick 0 scores nothing).
std::vector<int> score_log(const fencing::TrajectoryLog& log);

}  // namespace oracle

#include "fencing/ppo.hpp"

namespace oracle {

/// A random tiny actor-critic plus batch whose probability ratios stay away
/// from the clip kinks, so the loss is smooth around the parameters.
struct GradientCase {
  fencing::ActorCritic ac;
  fencing::RolloutBatch batch;
  std::vector<double> advantages;
  std::vector<double> returns;
  fencing::PpoConfig config;
};

GradientCase make_gradient_case(std::uint64_t seed);

/// Norm-wise relative error between the analytic PPO gradient and central
/// finite differences with step h.
double ppo_gradient_relative_error(const GradientCase& gc, double h = 1e-6);

/// Exhaustive max-min subset search over all C(n, k) index sets with the
/// same tie-breaking as select_most_separable.
std::vector<int> exhaustive_select(const Eigen::MatrixXd& points, int k);

}  // namespace oracle
