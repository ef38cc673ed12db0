#pragma once

#include <vector>

#include "fencing/common.hpp"
#include "fencing/json_io.hpp"

namespace fencing {

/// Per-axis plant model parameters.
struct PlantParams {
  Vec3 damping = Vec3::Zero();        // N s/m
  Vec3 armature = Vec3::Zero();       // kg of added inertia
  Vec3 friction_loss = Vec3::Zero();  // N, tanh-regularized Coulomb friction

  void validate() const;
};

/// Per-axis end-effector PD controller with a bounded output.
struct ControllerParams {
  Vec3 kp = Vec3::Zero();                 // N/m
  Vec3 kd = Vec3::Zero();                 // N s/m
  Vec3 output_bound = Vec3::Constant(1);  // N

  void validate() const;
};

/// Known (not identified) properties of the simulated plant.
struct PlantSettings {
  double base_mass = 1.0;                  // kg, carries the gravity load
  Vec3 gravity = Vec3::Zero();             // m/s^2 in the plant frame
  double friction_velocity_scale = 0.05;   // m/s, tanh regularization width
};

struct PlantInit {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
};

/// Explicit-Euler simulation of three decoupled point-mass axes. The desired
/// position at tick t is init.position + control_seq[t]; per axis
///   F = clamp(kp (target - p) - kd v, -bound, bound)
///   (m0 + armature) a = F - damping v - friction tanh(v / v_s) + m0 g.
/// Returns control_seq.size() + 1 positions, starting with the initial one.
/// Throws std::runtime_error if the state becomes non-finite.
std::vector<Vec3> simulate_plant(const PlantParams& plant, const ControllerParams& ctrl,
                                 const std::vector<Vec3>& control_seq, double dt,
                                 const PlantInit& init, const PlantSettings& settings = {});

/// Velocities alongside positions, for energy checks.
struct PlantTrace {
  std::vector<Vec3> positions;
  std::vector<Vec3> velocities;
};
PlantTrace simulate_plant_trace(const PlantParams& plant, const ControllerParams& ctrl,
                                const std::vector<Vec3>& control_seq, double dt,
                                const PlantInit& init, const PlantSettings& settings = {});

/// Recorded run of the reference system under a fixed control sequence.
struct ReferenceRun {
  double dt = 0.01;
  std::vector<Vec3> control_seq;
  std::vector<Vec3> trajectory;  // control_seq.size() + 1 poses
  PlantInit init;
  PlantSettings settings;
  Json meta = Json::object();

  void validate() const;
};

/// Sum over t of |a_t - b_t|^2. Sequences must have equal length.
double squared_trajectory_error(const std::vector<Vec3>& a, const std::vector<Vec3>& b);

/// Simulates the candidate on the reference's control sequence and returns
/// the summed squared position error against the reference trajectory.
double trajectory_error(const PlantParams& plant, const ControllerParams& ctrl,
                        const ReferenceRun& reference);

Json reference_to_json(const ReferenceRun& run);
ReferenceRun reference_from_json(const Json& j);

}  // namespace fencing
