#include "fencing/plant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fencing {

void PlantParams::validate() const {
  if ((damping.array() < 0).any() || (armature.array() < 0).any() ||
      (friction_loss.array() < 0).any() || !damping.allFinite() || !armature.allFinite() ||
      !friction_loss.allFinite()) {
    throw std::invalid_argument("PlantParams: entries must be finite and >= 0");
  }
}

void ControllerParams::validate() const {
  if ((kp.array() < 0).any() || (kd.array() < 0).any() || !kp.allFinite() || !kd.allFinite()) {
    throw std::invalid_argument("ControllerParams: gains must be finite and >= 0");
  }
  if (!(output_bound.array() > 0).all() || !output_bound.allFinite()) {
    throw std::invalid_argument("ControllerParams: output bound must be > 0");
  }
}

PlantTrace simulate_plant_trace(const PlantParams& plant, const ControllerParams& ctrl,
                                const std::vector<Vec3>& control_seq, double dt,
                                const PlantInit& init, const PlantSettings& settings) {
  plant.validate();
  ctrl.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("simulate_plant: dt must be > 0");

  PlantTrace trace;
  trace.positions.reserve(control_seq.size() + 1);
  trace.velocities.reserve(control_seq.size() + 1);
  Vec3 p = init.position;
  Vec3 v = init.velocity;
  trace.positions.push_back(p);
  trace.velocities.push_back(v);
  const double m0 = settings.base_mass;
  const double vs = settings.friction_velocity_scale;
  for (const Vec3& offset : control_seq) {
    Vec3 acc;
    for (int i = 0; i < 3; ++i) {
      const double target = init.position[i] + offset[i];
      const double force = std::clamp(ctrl.kp[i] * (target - p[i]) - ctrl.kd[i] * v[i],
                                      -ctrl.output_bound[i], ctrl.output_bound[i]);
      const double resist = plant.damping[i] * v[i] + plant.friction_loss[i] * std::tanh(v[i] / vs);
      acc[i] = (force - resist + m0 * settings.gravity[i]) / (m0 + plant.armature[i]);
    }
    p += v * dt;
    v += acc * dt;
    if (!p.allFinite() || !v.allFinite()) {
      throw std::runtime_error("simulate_plant: state became non-finite at tick " +
                               std::to_string(trace.positions.size()));
    }
    trace.positions.push_back(p);
    trace.velocities.push_back(v);
  }
  return trace;
}

std::vector<Vec3> simulate_plant(const PlantParams& plant, const ControllerParams& ctrl,
                                 const std::vector<Vec3>& control_seq, double dt,
                                 const PlantInit& init, const PlantSettings& settings) {
  return simulate_plant_trace(plant, ctrl, control_seq, dt, init, settings).positions;
}

void ReferenceRun::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("ReferenceRun: dt must be > 0");
  if (trajectory.size() != control_seq.size() + 1) {
    throw std::invalid_argument("ReferenceRun: trajectory must have one more pose than controls");
  }
}

double squared_trajectory_error(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("trajectory length mismatch");
  double sum = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) sum += (a[t] - b[t]).squaredNorm();
  return sum;
}

double trajectory_error(const PlantParams& plant, const ControllerParams& ctrl,
                        const ReferenceRun& reference) {
  reference.validate();
  return squared_trajectory_error(
      reference.trajectory,
      simulate_plant(plant, ctrl, reference.control_seq, reference.dt, reference.init,
                     reference.settings));
}

namespace {
Json vec_list(const std::vector<Vec3>& vs) {
  Json j = Json::array();
  for (const auto& v : vs) j.push_back(vec3_to_json(v));
  return j;
}
std::vector<Vec3> vec_list_from(const Json& j) {
  std::vector<Vec3> out;
  for (const auto& e : j) out.push_back(vec3_from_json(e));
  return out;
}
}  // namespace

Json reference_to_json(const ReferenceRun& run) {
  return Json{{"dt", run.dt},
              {"control_seq", vec_list(run.control_seq)},
              {"trajectory", vec_list(run.trajectory)},
              {"init", {{"position", vec3_to_json(run.init.position)},
                        {"velocity", vec3_to_json(run.init.velocity)}}},
              {"settings", {{"base_mass", run.settings.base_mass},
                            {"gravity", vec3_to_json(run.settings.gravity)},
                            {"friction_velocity_scale", run.settings.friction_velocity_scale}}},
              {"meta", run.meta}};
}

ReferenceRun reference_from_json(const Json& j) {
  ReferenceRun run;
  run.dt = j.at("dt").get<double>();
  run.control_seq = vec_list_from(j.at("control_seq"));
  run.trajectory = vec_list_from(j.at("trajectory"));
  if (j.contains("init")) {
    run.init.position = vec3_from_json(j["init"].at("position"));
    run.init.velocity = vec3_from_json(j["init"].at("velocity"));
  }
  if (j.contains("settings")) {
    const Json& s = j["settings"];
    run.settings.base_mass = s.value("base_mass", 1.0);
    if (s.contains("gravity")) run.settings.gravity = vec3_from_json(s["gravity"]);
    run.settings.friction_velocity_scale = s.value("friction_velocity_scale", 0.05);
  }
  if (j.contains("meta")) run.meta = j["meta"];
  run.validate();
  return run;
}

}  // namespace fencing
