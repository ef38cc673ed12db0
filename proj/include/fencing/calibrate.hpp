#pragma once

#include <cstdint>

#include "fencing/cmaes.hpp"
#include "fencing/plant.hpp"

namespace fencing {

inline constexpr int kSysIdParameterCount = 18;

/// Stacked order: damping, armature, friction_loss, kp, kd, output_bound,
/// each x, y, z.
Eigen::VectorXd stack_parameters(const PlantParams& plant, const ControllerParams& ctrl);
void unstack_parameters(const Eigen::VectorXd& x, PlantParams& plant, ControllerParams& ctrl);

struct CalibrationBounds {
  PlantParams plant_lower;
  PlantParams plant_upper;
  ControllerParams ctrl_lower;
  ControllerParams ctrl_upper;

  static CalibrationBounds defaults();
  Eigen::VectorXd lower() const;
  Eigen::VectorXd upper() const;
};

struct CalibrationResult {
  PlantParams plant;
  ControllerParams controller;
  double residual = 0.0;
  int restarts_used = 0;
  CmaResult search;  // best run, in normalized [0, 1]^18 coordinates
};

struct CalibrationOptions {
  double sigma0 = 0.3;
  int max_generations = 3000;  // per restart
  int restarts = 6;            // IPOP: population doubles on every restart
  double target_residual = 1e-16;
  int threads = 1;
};

/// Minimises trajectory_error over the stacked parameters with CMA-ES in box
/// coordinates normalized to [0, 1]^18. Starts at the box center unless an
/// initial guess is given; restarts with a larger population while the
/// residual stays above target.
CalibrationResult calibrate(const ReferenceRun& reference, const CalibrationBounds& bounds,
                            std::uint64_t seed, const CalibrationOptions& options = {},
                            const Eigen::VectorXd* initial_guess = nullptr);

/// Ground truth used by the synthetic stand-in for the real system.
struct HiddenPlant {
  PlantParams plant;
  ControllerParams controller;
  PlantSettings settings;

  static HiddenPlant example();
};

/// Piecewise-constant random step targets (held 0.4-0.8 s, up to `amplitude`
/// per axis) applied to the hidden plant. The steps are large enough to
/// saturate the controller, which separates controller from plant damping.
ReferenceRun make_reference_run(const HiddenPlant& truth, int ticks, double dt,
                                double amplitude, std::uint64_t seed);

Json calibration_to_json(const CalibrationResult& result);

}  // namespace fencing
