#pragma once

#include <string>

#include "fencing/game.hpp"

namespace fencing {

enum class RewardMode { kMixed, kScoreOnly };

const char* reward_mode_name(RewardMode mode);
RewardMode parse_reward_mode(const std::string& name);

/// Dense exploration signal, <= 0 and 0 at the ideal placement.
///  antagonist:  -(distance from its blade to the target center)
///  protagonist: -(distance from its blade to the "defend" segment joining the
///                target center and the antagonist blade point closest to it)
double shaping_reward(const GameState& state, Role role, const GameConfig& config);

/// Learner-perspective reward. `score_delta` is the antagonist's score change;
/// the protagonist receives its negation.
double tick_reward(int score_delta, double shaping, RewardMode mode, double alpha,
                   Role role = Role::kAntagonist);

}  // namespace fencing
