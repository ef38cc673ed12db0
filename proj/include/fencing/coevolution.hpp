#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fencing/policy_library.hpp"
#include "fencing/rollout.hpp"

namespace fencing {

/// Everything shared by all training blocks of a run.
struct TrainingContext {
  GameConfig game;
  PpoConfig ppo;
  NetworkShape network;
};

struct PhaseConfig {
  int phase = 1;
  int n_iter = 2;          // phase one: number of (mu, nu) block pairs
  int blocks = 0;          // phase two: number of alternating small blocks
  int n_mu = 60;           // updates per antagonist block
  int n_nu = 60;           // updates per protagonist block
  RewardMode reward_mode = RewardMode::kMixed;
  double alpha = 0.01;     // shaping weight in mixed mode
  int rollout_ticks = 16000;
  int convergence_window = 10;
  double convergence_threshold = 0.05;
  int timeout_updates = 60;
  int snapshot_cadence = 5;
  OpponentSampling sampling = OpponentSampling::kLatest;
  int eval_games = 0;      // > 0 evaluates the learner before and after each block

  void validate() const;
  int total_blocks() const { return phase == 1 ? 2 * n_iter : blocks; }

  static PhaseConfig phase_one_defaults();
  static PhaseConfig phase_two_defaults();
};

/// A live learner: current parameters, optimizer state and lineage counter.
struct Learner {
  Role role = Role::kAntagonist;
  ActorCritic params;
  AdamState adam;
  int update_index = 0;
  std::string parent_id;
};

/// Metadata emitted for every training block; enough to audit the schedule
/// and to plot score curves.
struct BlockRecord {
  int index = 0;
  int phase = 1;
  int round = 0;
  Role learner = Role::kAntagonist;
  std::string opponent_id;
  int history_size = 1;    // opponent pool the opponent was drawn from
  int opponent_index = 0;  // position of the opponent in that pool
  RewardMode reward_mode = RewardMode::kMixed;
  OpponentSampling sampling = OpponentSampling::kLatest;
  std::uint64_t seed = 0;
  int updates_run = 0;
  bool converged = false;
  std::vector<double> score_curve;  // learner-perspective mean score per update
  std::optional<double> pre_eval;   // learner-perspective
  std::optional<double> post_eval;
  std::vector<std::string> snapshot_ids;
};

Json block_record_to_json(const BlockRecord& record);

/// Relative change of the windowed mean score below the threshold: compares
/// the mean of the last `window` entries with the mean of the `window`
/// before them.
bool has_converged(const std::vector<double>& curve, int window, double threshold);

struct BlockResult {
  BlockRecord record;
  std::vector<SnapshotPtr> snapshots;
};

/// Up to min(n_updates, timeout) iterations of collect + PPO update for
/// `learner` against a fixed opponent. Emits a snapshot into `library` every
/// `snapshot_cadence` updates and after the final update. Stops early once
/// has_converged() holds.
BlockResult train_block(const TrainingContext& ctx, Learner& learner,
                        const AgentFactory& opponent, const std::string& opponent_id,
                        const PhaseConfig& phase, int n_updates, int round,
                        std::uint64_t seed, PolicyLibrary& library);

AgentFactory snapshot_opponent(SnapshotPtr snapshot, const GameConfig& game,
                               bool deterministic = false);

struct PhaseOneResult {
  Learner antagonist;
  Learner protagonist;
  std::string warm_antagonist_id;
  std::string warm_protagonist_id;
  std::vector<BlockRecord> blocks;
};

/// Warm-start training: n_iter repetitions of [antagonist block, protagonist
/// block], each learner facing the opponent's latest snapshot.
PhaseOneResult run_phase_one(const TrainingContext& ctx, const PhaseConfig& phase,
                             std::uint64_t seed, PolicyLibrary& library);

struct PhaseTwoResult {
  std::string antagonist_id;
  std::string protagonist_id;
  std::vector<BlockRecord> blocks;
};

/// Characterization round: `phase.blocks` alternating small blocks starting
/// from the warm pair, each against an opponent drawn from that role's
/// history (phase-one snapshots plus this round's). Registers the final pair
/// under `round`.
PhaseTwoResult run_phase_two(const TrainingContext& ctx, const PhaseConfig& phase,
                             const std::string& warm_antagonist_id,
                             const std::string& warm_protagonist_id, int round,
                             std::uint64_t round_seed, PolicyLibrary& library);

}  // namespace fencing
