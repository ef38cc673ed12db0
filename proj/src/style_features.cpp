#include "fencing/style.hpp"

#include <cmath>
#include <stdexcept>

namespace fencing {

const std::array<const char*, kStyleFeatureCount> kStyleFeatureNames = {
    "disp_x", "disp_y", "disp_z", "avg_vel", "avg_acc", "avg_jerk", "total_ke", "smoothness"};

std::array<double, kStyleFeatureCount> StyleFeatures::as_array() const {
  return {disp_x, disp_y, disp_z, avg_vel, avg_acc, avg_jerk, total_ke, smoothness};
}

StyleFeatures StyleFeatures::from_array(const std::array<double, kStyleFeatureCount>& a) {
  return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7]};
}

StyleTrajectory style_trajectory(const TrajectoryLog& log, Role role) {
  StyleTrajectory t;
  t.dt = log.config.dt;
  t.positions.reserve(log.ticks.size());
  t.velocities.reserve(log.ticks.size());
  for (const auto& tick : log.ticks) {
    const BatState& bat = role == Role::kAntagonist ? tick.bat_a : tick.bat_p;
    t.positions.push_back(bat.pose.center);
    t.velocities.push_back(bat.lin_vel);
  }
  return t;
}

StyleFeatures featurize_game(const StyleTrajectory& traj) {
  const std::size_t n = traj.positions.size();
  if (n < 4) throw std::invalid_argument("featurize_game: need at least 4 samples");
  if (!(traj.dt > 0.0)) throw std::invalid_argument("featurize_game: dt must be > 0");
  const double dt = traj.dt;

  std::vector<Vec3> vel(n - 1);
  for (std::size_t t = 0; t + 1 < n; ++t) vel[t] = (traj.positions[t + 1] - traj.positions[t]) / dt;
  std::vector<Vec3> acc(n - 2);
  for (std::size_t t = 0; t + 1 < vel.size(); ++t) acc[t] = (vel[t + 1] - vel[t]) / dt;
  std::vector<Vec3> jerk(n - 3);
  for (std::size_t t = 0; t + 1 < acc.size(); ++t) jerk[t] = (acc[t + 1] - acc[t]) / dt;

  StyleFeatures f;
  for (std::size_t t = 0; t + 1 < n; ++t) {
    const Vec3 d = (traj.positions[t + 1] - traj.positions[t]).cwiseAbs();
    f.disp_x += d.x();
    f.disp_y += d.y();
    f.disp_z += d.z();
  }
  double jerk_sq = 0.0;
  for (const auto& v : vel) {
    f.avg_vel += v.norm();
    f.total_ke += 0.5 * v.squaredNorm() * dt;
  }
  for (const auto& a : acc) f.avg_acc += a.norm();
  for (const auto& j : jerk) {
    f.avg_jerk += j.norm();
    jerk_sq += j.squaredNorm();
  }
  f.avg_vel /= static_cast<double>(vel.size());
  f.avg_acc /= static_cast<double>(acc.size());
  f.avg_jerk /= static_cast<double>(jerk.size());
  f.smoothness = 1.0 / (1.0 + jerk_sq / static_cast<double>(jerk.size()));

  for (double x : f.as_array()) {
    if (!std::isfinite(x)) throw std::invalid_argument("featurize_game: non-finite feature");
  }
  return f;
}

}  // namespace fencing
