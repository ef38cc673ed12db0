#include "fencing/calibrate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fencing {

Eigen::VectorXd stack_parameters(const PlantParams& plant, const ControllerParams& ctrl) {
  Eigen::VectorXd x(kSysIdParameterCount);
  x << plant.damping, plant.armature, plant.friction_loss, ctrl.kp, ctrl.kd, ctrl.output_bound;
  return x;
}

void unstack_parameters(const Eigen::VectorXd& x, PlantParams& plant, ControllerParams& ctrl) {
  if (x.size() != kSysIdParameterCount) {
    throw std::invalid_argument("unstack_parameters: expected 18 values");
  }
  plant.damping = x.segment<3>(0);
  plant.armature = x.segment<3>(3);
  plant.friction_loss = x.segment<3>(6);
  ctrl.kp = x.segment<3>(9);
  ctrl.kd = x.segment<3>(12);
  ctrl.output_bound = x.segment<3>(15);
}

CalibrationBounds CalibrationBounds::defaults() {
  CalibrationBounds b;
  b.plant_lower = {Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  b.plant_upper = {Vec3::Constant(5.0), Vec3::Constant(2.0), Vec3::Constant(2.0)};
  b.ctrl_lower = {Vec3::Constant(10.0), Vec3::Zero(), Vec3::Constant(5.0)};
  b.ctrl_upper = {Vec3::Constant(200.0), Vec3::Constant(40.0), Vec3::Constant(50.0)};
  return b;
}

Eigen::VectorXd CalibrationBounds::lower() const { return stack_parameters(plant_lower, ctrl_lower); }
Eigen::VectorXd CalibrationBounds::upper() const { return stack_parameters(plant_upper, ctrl_upper); }

CalibrationResult calibrate(const ReferenceRun& reference, const CalibrationBounds& bounds,
                            std::uint64_t seed, const CalibrationOptions& options,
                            const Eigen::VectorXd* initial_guess) {
  reference.validate();
  const Eigen::VectorXd lo = bounds.lower();
  const Eigen::VectorXd hi = bounds.upper();
  if ((lo.array() > hi.array()).any()) throw std::invalid_argument("calibrate: inverted bounds");
  const Eigen::VectorXd span = (hi - lo).cwiseMax(1e-300);
  // output_bound must stay > 0; a zero lower bound is lifted slightly.
  auto to_physical = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    Eigen::VectorXd x = lo + u.cwiseProduct(hi - lo);
    x.segment<3>(15) = x.segment<3>(15).cwiseMax(1e-9);
    return x;
  };

  const Objective objective = [&](const Eigen::VectorXd& u) {
    PlantParams plant;
    ControllerParams ctrl;
    unstack_parameters(to_physical(u), plant, ctrl);
    try {
      return trajectory_error(plant, ctrl, reference);
    } catch (const std::runtime_error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  Eigen::VectorXd u0 = Eigen::VectorXd::Constant(kSysIdParameterCount, 0.5);
  if (initial_guess) {
    u0 = ((*initial_guess - lo).cwiseQuotient(span)).cwiseMax(0.0).cwiseMin(1.0);
  }

  CmaConfig cfg;
  cfg.sigma0 = options.sigma0;
  cfg.max_generations = options.max_generations;
  cfg.target_objective = options.target_residual;
  cfg.lower = Eigen::VectorXd::Zero(kSysIdParameterCount);
  cfg.upper = Eigen::VectorXd::Ones(kSysIdParameterCount);
  cfg.seed = seed;
  cfg.threads = options.threads;

  CalibrationResult out;
  out.search.best_f = std::numeric_limits<double>::infinity();
  for (int r = 0; r <= options.restarts; ++r) {
    cfg.seed = derive_seed(seed, static_cast<std::uint64_t>(r));
    CmaResult run = cmaes_minimize(objective, u0, cfg);
    if (run.best_f < out.search.best_f) out.search = std::move(run);
    out.restarts_used = r;
    if (out.search.best_f <= options.target_residual) break;
    cfg.population = (r == 0 ? 4 + static_cast<int>(3 * std::log(kSysIdParameterCount))
                             : cfg.population) * 2;
  }
  unstack_parameters(to_physical(out.search.best_x), out.plant, out.controller);
  out.residual = out.search.best_f;
  return out;
}

HiddenPlant HiddenPlant::example() {
  HiddenPlant h;
  h.plant.damping = Vec3(0.8, 1.2, 0.5);
  h.plant.armature = Vec3(0.3, 0.6, 0.45);
  h.plant.friction_loss = Vec3(0.4, 0.7, 0.25);
  h.controller.kp = Vec3(80.0, 120.0, 100.0);
  h.controller.kd = Vec3(12.0, 18.0, 15.0);
  h.controller.output_bound = Vec3(15.0, 20.0, 25.0);
  // Gravity seen through a tilted mounting: a known load on every axis.
  h.settings.gravity = 9.81 * Vec3(0.25, -0.35, -1.0).normalized();
  return h;
}

ReferenceRun make_reference_run(const HiddenPlant& truth, int ticks, double dt,
                                double amplitude, std::uint64_t seed) {
  if (ticks < 1) throw std::invalid_argument("make_reference_run: ticks must be >= 1");
  Rng rng(seed);
  ReferenceRun run;
  run.dt = dt;
  run.settings = truth.settings;
  run.control_seq.reserve(static_cast<std::size_t>(ticks));
  Vec3 current = Vec3::Zero();
  int hold = 0;
  for (int t = 0; t < ticks; ++t) {
    if (hold == 0) {
      for (int i = 0; i < 3; ++i) current[i] = uniform(rng, -amplitude, amplitude);
      hold = static_cast<int>(uniform(rng, 0.4, 0.8) / dt);
    }
    --hold;
    run.control_seq.push_back(current);
  }
  run.trajectory = simulate_plant(truth.plant, truth.controller, run.control_seq, dt, run.init,
                                  run.settings);
  run.meta = Json{{"generator", "synthetic"}, {"seed", seed}};
  return run;
}

Json calibration_to_json(const CalibrationResult& r) {
  Json history = Json::array();
  for (const auto& g : r.search.history) {
    history.push_back({{"generation", g.generation},
                       {"best_in_generation", g.best_in_generation},
                       {"best_ever", g.best_ever},
                       {"sigma", g.sigma},
                       {"evaluations", g.evaluations}});
  }
  return Json{{"plant", {{"damping", vec3_to_json(r.plant.damping)},
                         {"armature", vec3_to_json(r.plant.armature)},
                         {"friction_loss", vec3_to_json(r.plant.friction_loss)}}},
              {"controller", {{"kp", vec3_to_json(r.controller.kp)},
                              {"kd", vec3_to_json(r.controller.kd)},
                              {"output_bound", vec3_to_json(r.controller.output_bound)}}},
              {"residual", r.residual},
              {"generations", r.search.generations},
              {"restarts", r.restarts_used},
              {"evaluations", r.search.evaluations},
              {"history", history}};
}

}  // namespace fencing
