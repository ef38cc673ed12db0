#include "fencing/rewards.hpp"

#include <algorithm>
#include <stdexcept>

#include "fencing/geometry.hpp"

namespace fencing {

const char* reward_mode_name(RewardMode mode) {
  return mode == RewardMode::kMixed ? "mixed" : "score_only";
}

RewardMode parse_reward_mode(const std::string& name) {
  if (name == "mixed") return RewardMode::kMixed;
  if (name == "score_only") return RewardMode::kScoreOnly;
  throw std::invalid_argument("unknown reward mode: " + name);
}

double shaping_reward(const GameState& state, Role role, const GameConfig& config) {
  const Segment blade_a = bat_segment(state.bat_a.pose, config.bat_length);
  const Vec3& target = config.target_center;
  if (role == Role::kAntagonist) {
    return -point_segment_distance(target, blade_a.start, blade_a.end);
  }
  const Vec3 ab = blade_a.end - blade_a.start;
  const double t = std::clamp((target - blade_a.start).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  const Vec3 closest = blade_a.start + t * ab;
  const Segment blade_p = bat_segment(state.bat_p.pose, config.bat_length);
  if ((closest - target).squaredNorm() < 1e-18) {
    return -point_segment_distance(target, blade_p.start, blade_p.end);
  }
  return -segment_segment_distance(blade_p.start, blade_p.end, target, closest);
}

double tick_reward(int score_delta, double shaping, RewardMode mode, double alpha,
                   Role role) {
  const double score = role == Role::kAntagonist ? score_delta : -score_delta;
  return mode == RewardMode::kMixed ? score + alpha * shaping : score;
}

}  // namespace fencing
