#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fencing/common.hpp"

namespace fencing {

enum class Role { kAntagonist, kProtagonist };

const char* role_name(Role role);
Role parse_role(const std::string& name);
inline Role opponent_of(Role role) {
  return role == Role::kAntagonist ? Role::kProtagonist : Role::kAntagonist;
}

struct BatPose {
  Vec3 center = Vec3::Zero();
  Vec3 dir = Vec3::UnitZ();
  friend bool operator==(const BatPose&, const BatPose&) = default;
};

struct BatState {
  BatPose pose;
  Vec3 lin_vel = Vec3::Zero();
  Vec3 dir_vel = Vec3::Zero();
  friend bool operator==(const BatState&, const BatState&) = default;
};

/// Commanded pose offset for one tick: center translation and an axis-scaled
/// rotation of the bat direction. Clamped when applied, never on construction.
struct AgentAction {
  Vec3 d_pos = Vec3::Zero();
  Vec3 d_dir = Vec3::Zero();
};

struct GameConfig {
  double dt = 0.01;
  int horizon_ticks = 2000;

  Vec3 target_center{0.0, 0.0, 1.0};
  double target_radius = 0.15;

  double bat_length = 0.5;
  double bat_radius = 0.03;

  double v_max = 1.5;
  double omega_max = 4.0;
  double d_pos_max = 0.05;
  double d_dir_max = 0.1;

  // Antagonist on +x, protagonist on -x; both non-mobile.
  Vec3 anchor_a{0.8, 0.0, 1.0};
  Vec3 anchor_p{-0.8, 0.0, 1.0};
  double reach_radius = 0.8;

  // Start pose: center placed this far from the anchor towards the target,
  // blade pointing up. Jitter is seeded and applied by reset().
  double start_offset = 0.35;
  double start_jitter_pos = 0.03;
  double start_jitter_dir = 0.15;

  int camping_ticks = 200;
  int score_in_target = 1;
  int penalty_contact = -10;
  int reward_camping = 10;

  double horizon_seconds() const { return horizon_ticks * dt; }
  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;
  friend bool operator==(const GameConfig&, const GameConfig&) = default;
};

struct GameState {
  int tick = 0;
  BatState bat_a;
  BatState bat_p;
  int camping_counter = 0;
  int score = 0;
};

enum class ScoreKind { kScoreTick, kContactPenalty, kCampingReward };

const char* score_kind_name(ScoreKind kind);
ScoreKind parse_score_kind(const std::string& name);

struct ScoreEvent {
  int tick = 0;
  ScoreKind kind = ScoreKind::kScoreTick;
  friend bool operator==(const ScoreEvent&, const ScoreEvent&) = default;
};

int score_value(ScoreKind kind, const GameConfig& config);

struct Segment {
  Vec3 start;
  Vec3 end;
};

Segment bat_segment(const BatPose& pose, double length);

bool bat_in_target(const BatPose& pose, const GameConfig& config);
bool bats_in_contact(const BatPose& a, const BatPose& p,
                     const GameConfig& config);

struct TickScore {
  int delta = 0;
  std::vector<ScoreEvent> events;
  int camping_counter = 0;
};

/// Applies the fencing scoring rules to the geometry in `state` (tick
/// already advanced). Camping awards +10 each time the consecutive in-target
/// counter reaches `camping_ticks`, then resets the counter.
TickScore score_tick(const GameState& state, const GameConfig& config);

BatState apply_action(const BatState& bat, const AgentAction& action,
                      const Vec3& anchor, const GameConfig& config);

struct StepResult {
  GameState state;
  int delta = 0;
  std::vector<ScoreEvent> events;
  bool terminal = false;
};

/// Both actions act on the pre-step state; scoring runs on the post-step
/// state. Throws std::logic_error when `state` is already terminal.
StepResult step(const GameState& state, const AgentAction& act_a,
                const AgentAction& act_p, const GameConfig& config);

GameState reset(const GameConfig& config, std::uint64_t seed);

inline constexpr int kBatFeatureSize = 12;
inline constexpr int kObservationSize = 2 * kBatFeatureSize + 1;
using Observation = Eigen::Matrix<double, kObservationSize, 1>;

/// Self bat (center, dir, lin_vel, dir_vel), opponent bat, then game time in
/// seconds.
Observation observe(const GameState& state, Role perspective,
                    const GameConfig& config);

/// Inverse of the bat block layout used by observe().
BatState bat_from_observation(const Observation& obs, int block);

}  // namespace fencing
