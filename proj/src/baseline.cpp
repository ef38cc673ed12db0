#include "fencing/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fencing {

void HeuristicConfig::validate() const {
  if (!(angle_offset_deg >= 0.0)) throw std::invalid_argument("HeuristicConfig: angle range must be >= 0");
  if (!(standoff_min <= standoff_max)) throw std::invalid_argument("HeuristicConfig: standoff range inverted");
  if (!(hold_probability >= 0.0 && hold_probability <= 1.0)) {
    throw std::invalid_argument("HeuristicConfig: hold probability must be in [0,1]");
  }
  if (!(sword_length > 0.0)) throw std::invalid_argument("HeuristicConfig: sword_length must be > 0");
}

double closest_point_param(const Vec3& tar, const Vec3& h_low, const Vec3& h_up,
                           double sword_length, bool textbook_projection) {
  const Vec3 axis = h_up - h_low;
  const double len_sq = axis.squaredNorm();
  if (len_sq <= 1e-24) throw std::invalid_argument("closest_point_param: degenerate bat");
  const double denom = textbook_projection ? len_sq : 2.0 * sword_length;
  return std::max(0.0, std::min(1.0, (tar - h_low).dot(axis) / denom));
}

Vec3 desired_position(const Vec3& tar, const Vec3& h_close, double u) {
  return tar + (h_close - tar) * u;
}

Vec3 perpendicular_direction(const Vec3& human_dir, const Vec3& tar, const Vec3& h_close) {
  const Vec3 h = human_dir.normalized();
  for (const Vec3& ref : {Vec3(h_close - tar), Vec3(Vec3::UnitZ()), Vec3(Vec3::UnitX())}) {
    const Vec3 c = h.cross(ref);
    if (c.norm() > 1e-6 * std::max(1.0, ref.norm())) return c.normalized();
  }
  return h.unitOrthogonal();
}

Eigen::Matrix3d offset_rotation(const Vec3& o) {
  return (Eigen::AngleAxisd(o.x(), Vec3::UnitX()) * Eigen::AngleAxisd(o.y(), Vec3::UnitY()) *
          Eigen::AngleAxisd(o.z(), Vec3::UnitZ()))
      .toRotationMatrix();
}

HeuristicDecision baseline_decide(const Observation& obs, HeuristicState& state,
                                  const HeuristicConfig& config, const GameConfig& game,
                                  Rng& rng) {
  const double range = config.angle_offset_deg * M_PI / 180.0;
  HeuristicDecision d;
  d.standoff = uniform(rng, config.standoff_min, config.standoff_max);
  for (int i = 0; i < 3; ++i) d.offsets_rad[i] = uniform(rng, -range, range);
  const double coin = uniform(rng, 0.0, 1.0);

  const BatState human = bat_from_observation(obs, 1);
  const Vec3 half = 0.5 * game.bat_length * human.pose.dir;
  const Vec3 h_low = human.pose.center - half;
  const Vec3 h_up = human.pose.center + half;
  const Vec3& tar = game.target_center;

  d.ht = closest_point_param(tar, h_low, h_up, config.sword_length, config.textbook_projection);
  const Vec3 h_close = closest_point_on_bat(h_low, h_up, d.ht);
  d.fresh.center = desired_position(tar, h_close, d.standoff);
  d.fresh.dir =
      (offset_rotation(d.offsets_rad) * perpendicular_direction(human.pose.dir, tar, h_close))
          .normalized();

  d.held = coin < config.hold_probability && state.last_desired.has_value();
  d.commanded = d.held ? *state.last_desired : d.fresh;
  state.last_desired = d.fresh;
  return d;
}

AgentAction baseline_act(const Observation& obs, HeuristicState& state,
                         const HeuristicConfig& config, const GameConfig& game, Rng& rng) {
  const HeuristicDecision d = baseline_decide(obs, state, config, game, rng);
  return action_towards(bat_from_observation(obs, 0).pose, d.commanded);
}

BaselineAgent::BaselineAgent(HeuristicConfig config, GameConfig game)
    : config_(config), game_(game) {
  config_.validate();
}

void BaselineAgent::begin_game(std::uint64_t seed) {
  rng_.seed(seed);
  state_ = HeuristicState{};
}

AgentAction BaselineAgent::act(const Observation& obs) {
  return baseline_act(obs, state_, config_, game_, rng_);
}

}  // namespace fencing
