#pragma once

#include <array>
#include <string>
#include <vector>

#include "fencing/trajectory_log.hpp"

namespace fencing {

inline constexpr int kStyleFeatureCount = 8;

/// End-effector samples of one agent for one game, uniformly spaced by dt.
struct StyleTrajectory {
  std::vector<Vec3> positions;
  std::vector<Vec3> velocities;  // as logged; featurization differentiates positions
  double dt = 0.01;
};

StyleTrajectory style_trajectory(const TrajectoryLog& log, Role role);

struct StyleFeatures {
  double disp_x = 0.0;     // total path length along x (m)
  double disp_y = 0.0;
  double disp_z = 0.0;
  double avg_vel = 0.0;    // m/s
  double avg_acc = 0.0;    // m/s^2
  double avg_jerk = 0.0;   // m/s^3
  double total_ke = 0.0;   // J, unit mass
  double smoothness = 1.0; // 1 / (1 + mean |jerk|^2), in (0, 1]

  std::array<double, kStyleFeatureCount> as_array() const;
  static StyleFeatures from_array(const std::array<double, kStyleFeatureCount>& a);
};

extern const std::array<const char*, kStyleFeatureCount> kStyleFeatureNames;

/// Finite-difference featurization: v, a and jerk from first, second and
/// third differences of position over dt. Needs at least 4 samples; throws
/// std::invalid_argument otherwise.
StyleFeatures featurize_game(const StyleTrajectory& traj);

}  // namespace fencing
