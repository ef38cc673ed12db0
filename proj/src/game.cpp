#include "fencing/game.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fencing/geometry.hpp"

namespace fencing {
namespace {

bool finite(const Vec3& v) { return v.allFinite(); }

Vec3 project_into_sphere(const Vec3& p, const Vec3& center, double radius) {
  const Vec3 offset = p - center;
  const double n = offset.norm();
  if (n <= radius) return p;
  return center + offset * (radius / n);
}

BatState start_bat(const Vec3& anchor, const GameConfig& config, Rng& rng) {
  BatState bat;
  const Vec3 toward = (config.target_center - anchor).normalized();
  Vec3 center = anchor + config.start_offset * toward;
  Vec3 dir = Vec3::UnitZ();
  if (config.start_jitter_pos > 0.0) {
    for (int i = 0; i < 3; ++i) {
      center[i] += uniform(rng, -config.start_jitter_pos, config.start_jitter_pos);
    }
  }
  if (config.start_jitter_dir > 0.0) {
    Vec3 rot;
    for (int i = 0; i < 3; ++i) {
      rot[i] = uniform(rng, -config.start_jitter_dir, config.start_jitter_dir);
    }
    dir = rotate_by_vector(dir, rot).normalized();
  }
  bat.pose.center = project_into_sphere(center, anchor, config.reach_radius);
  bat.pose.dir = dir;
  return bat;
}

void write_bat(Observation& obs, int offset, const BatState& bat) {
  obs.segment<3>(offset) = bat.pose.center;
  obs.segment<3>(offset + 3) = bat.pose.dir;
  obs.segment<3>(offset + 6) = bat.lin_vel;
  obs.segment<3>(offset + 9) = bat.dir_vel;
}

}  // namespace

const char* role_name(Role role) {
  return role == Role::kAntagonist ? "antagonist" : "protagonist";
}

Role parse_role(const std::string& name) {
  if (name == "antagonist" || name == "mu") return Role::kAntagonist;
  if (name == "protagonist" || name == "nu") return Role::kProtagonist;
  throw std::invalid_argument("unknown role: " + name);
}

void GameConfig::validate() const {
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("GameConfig: " + msg);
  };
  if (!(dt > 0.0)) fail("dt must be > 0");
  if (horizon_ticks <= 0) fail("horizon_ticks must be > 0");
  if (!(target_radius > 0.0)) fail("target_radius must be > 0");
  if (!(bat_length > 0.0)) fail("bat_length must be > 0");
  if (!(bat_radius > 0.0)) fail("bat_radius must be > 0");
  if (!(v_max > 0.0) || !(omega_max > 0.0)) fail("velocity limits must be > 0");
  if (!(d_pos_max > 0.0) || !(d_dir_max > 0.0)) fail("offset limits must be > 0");
  if (!(reach_radius > 0.0)) fail("reach_radius must be > 0");
  if (camping_ticks <= 0) fail("camping_ticks must be > 0");
  if (!finite(target_center) || !finite(anchor_a) || !finite(anchor_p)) {
    fail("non-finite geometry");
  }
  if ((anchor_a - target_center).norm() > reach_radius + target_radius ||
      (anchor_p - target_center).norm() > reach_radius + target_radius) {
    fail("a reach sphere does not intersect the target sphere");
  }
  if (start_offset < 0.0 || start_offset > reach_radius) {
    fail("start_offset must lie within the reach sphere");
  }
  if (start_jitter_pos < 0.0 || start_jitter_dir < 0.0) {
    fail("start jitter must be >= 0");
  }
}

const char* score_kind_name(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::kScoreTick: return "score_tick";
    case ScoreKind::kContactPenalty: return "contact_penalty";
    case ScoreKind::kCampingReward: return "camping_reward";
  }
  return "unknown";
}

ScoreKind parse_score_kind(const std::string& name) {
  if (name == "score_tick") return ScoreKind::kScoreTick;
  if (name == "contact_penalty") return ScoreKind::kContactPenalty;
  if (name == "camping_reward") return ScoreKind::kCampingReward;
  throw std::invalid_argument("unknown score event kind: " + name);
}

int score_value(ScoreKind kind, const GameConfig& config) {
  switch (kind) {
    case ScoreKind::kScoreTick: return config.score_in_target;
    case ScoreKind::kContactPenalty: return config.penalty_contact;
    case ScoreKind::kCampingReward: return config.reward_camping;
  }
  return 0;
}

Segment bat_segment(const BatPose& pose, double length) {
  const Vec3 half = 0.5 * length * pose.dir;
  return {pose.center - half, pose.center + half};
}

bool bat_in_target(const BatPose& pose, const GameConfig& config) {
  const Segment seg = bat_segment(pose, config.bat_length);
  return segment_sphere_intersects(seg.start, seg.end, config.target_center,
                                   config.target_radius);
}

bool bats_in_contact(const BatPose& a, const BatPose& p,
                     const GameConfig& config) {
  const Segment sa = bat_segment(a, config.bat_length);
  const Segment sp = bat_segment(p, config.bat_length);
  return segment_segment_distance(sa.start, sa.end, sp.start, sp.end) <
         2.0 * config.bat_radius;
}

TickScore score_tick(const GameState& state, const GameConfig& config) {
  TickScore out;
  out.camping_counter = state.camping_counter;

  if (bat_in_target(state.bat_a.pose, config)) {
    const ScoreKind kind = bats_in_contact(state.bat_a.pose, state.bat_p.pose, config)
                               ? ScoreKind::kContactPenalty
                               : ScoreKind::kScoreTick;
    out.delta += score_value(kind, config);
    out.events.push_back({state.tick, kind});
  }

  if (bat_in_target(state.bat_p.pose, config)) {
    ++out.camping_counter;
    if (out.camping_counter >= config.camping_ticks) {
      out.delta += config.reward_camping;
      out.events.push_back({state.tick, ScoreKind::kCampingReward});
      out.camping_counter = 0;
    }
  } else {
    out.camping_counter = 0;
  }
  return out;
}

BatState apply_action(const BatState& bat, const AgentAction& action,
                      const Vec3& anchor, const GameConfig& config) {
  const Vec3 d_pos = clamp_norm(action.d_pos.allFinite() ? action.d_pos : Vec3::Zero(),
                                config.d_pos_max);
  const Vec3 d_dir = clamp_norm(action.d_dir.allFinite() ? action.d_dir : Vec3::Zero(),
                                config.d_dir_max);

  BatState out;
  out.lin_vel = clamp_norm(d_pos / config.dt, config.v_max);
  out.dir_vel = clamp_norm(d_dir / config.dt, config.omega_max);

  const Vec3 moved = bat.pose.center + out.lin_vel * config.dt;
  out.pose.center = project_into_sphere(moved, anchor, config.reach_radius);
  if (out.pose.center != moved) {
    out.lin_vel = (out.pose.center - bat.pose.center) / config.dt;
  }
  out.pose.dir =
      rotate_by_vector(bat.pose.dir, out.dir_vel * config.dt).normalized();
  return out;
}

StepResult step(const GameState& state, const AgentAction& act_a,
                const AgentAction& act_p, const GameConfig& config) {
  if (state.tick >= config.horizon_ticks) {
    throw std::logic_error("step: game already terminal at tick " +
                           std::to_string(state.tick));
  }
  StepResult out;
  out.state = state;
  out.state.tick = state.tick + 1;
  out.state.bat_a = apply_action(state.bat_a, act_a, config.anchor_a, config);
  out.state.bat_p = apply_action(state.bat_p, act_p, config.anchor_p, config);

  TickScore ts = score_tick(out.state, config);
  out.delta = ts.delta;
  out.events = std::move(ts.events);
  out.state.camping_counter = ts.camping_counter;
  out.state.score += ts.delta;
  out.terminal = out.state.tick == config.horizon_ticks;
  return out;
}

GameState reset(const GameConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  GameState state;
  state.bat_a = start_bat(config.anchor_a, config, rng);
  state.bat_p = start_bat(config.anchor_p, config, rng);
  return state;
}

Observation observe(const GameState& state, Role perspective,
                    const GameConfig& config) {
  Observation obs;
  const bool a_first = perspective == Role::kAntagonist;
  write_bat(obs, 0, a_first ? state.bat_a : state.bat_p);
  write_bat(obs, kBatFeatureSize, a_first ? state.bat_p : state.bat_a);
  obs[2 * kBatFeatureSize] = state.tick * config.dt;
  return obs;
}

BatState bat_from_observation(const Observation& obs, int block) {
  const int offset = block * kBatFeatureSize;
  BatState bat;
  bat.pose.center = obs.segment<3>(offset);
  bat.pose.dir = obs.segment<3>(offset + 3);
  bat.lin_vel = obs.segment<3>(offset + 6);
  bat.dir_vel = obs.segment<3>(offset + 9);
  return bat;
}

}  // namespace fencing
