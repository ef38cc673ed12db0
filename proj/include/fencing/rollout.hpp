#pragma once

#include <cstdint>
#include <vector>

#include "fencing/agent.hpp"
#include "fencing/ppo.hpp"
#include "fencing/rewards.hpp"

namespace fencing {

struct RolloutStats {
  std::vector<int> game_scores;  // antagonist's final score per game
  double mean_score = 0.0;       // learner perspective
};

struct RolloutResult {
  RolloutBatch batch;
  RolloutStats stats;
};

/// Plays whole games back to back until at least `n_ticks` learner samples
/// are collected. The learner samples stochastically and records its
/// transitions; the opponent acts through its own Agent and records nothing.
/// Games are seeded from `seed` by index and may run on several threads; the
/// result does not depend on the thread count.
RolloutResult collect_rollouts(const GameConfig& config, const ActorCritic& learner,
                               Role learner_role, const AgentFactory& opponent,
                               int n_ticks, RewardMode mode, double alpha,
                               std::uint64_t seed);

/// Mean learner-perspective score over `games` games. Learner acts on its
/// mean action unless `stochastic` is set.
double evaluate(const GameConfig& config, const ActorCritic& learner, Role learner_role,
                const AgentFactory& opponent, int games, std::uint64_t seed,
                bool stochastic = false);

/// Number of worker threads used for game-parallel work.
int worker_count(int jobs);

}  // namespace fencing
