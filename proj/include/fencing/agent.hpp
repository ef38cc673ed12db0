#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "fencing/gaussian_policy.hpp"
#include "fencing/trajectory_log.hpp"

namespace fencing {

/// Anything that can control one bat for a game. Observations are always
/// from the agent's own perspective.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual void begin_game(std::uint64_t seed) = 0;
  virtual AgentAction act(const Observation& obs) = 0;
};

using AgentFactory = std::function<std::unique_ptr<Agent>()>;

class StationaryAgent final : public Agent {
 public:
  void begin_game(std::uint64_t) override {}
  AgentAction act(const Observation&) override { return {}; }
};

class PolicyAgent final : public Agent {
 public:
  PolicyAgent(std::shared_ptr<const ActorCritic> params, GameConfig config,
              bool deterministic);
  void begin_game(std::uint64_t seed) override;
  AgentAction act(const Observation& obs) override;

 private:
  std::shared_ptr<const ActorCritic> params_;
  GameConfig config_;
  bool deterministic_;
  Rng rng_;
};

class ScriptedAgent final : public Agent {
 public:
  using Script = std::function<AgentAction(const Observation&)>;
  explicit ScriptedAgent(Script script) : script_(std::move(script)) {}
  void begin_game(std::uint64_t) override {}
  AgentAction act(const Observation& obs) override { return script_(obs); }

 private:
  Script script_;
};

/// Action that moves a bat from `current` towards `desired` (translation and
/// shortest rotation of the blade axis, sign of the axis chosen to minimise
/// the rotation). Limits are applied later by apply_action().
AgentAction action_towards(const BatPose& current, const BatPose& desired);

struct GameOutcome {
  int score = 0;
  int ticks = 0;
};

/// Plays a full game. The reset seed and each agent's seed are derived from
/// `seed`. When `log` is non-null it receives the complete trajectory.
GameOutcome play_game(const GameConfig& config, Agent& antagonist, Agent& protagonist,
                      std::uint64_t seed, TrajectoryLog* log = nullptr);

}  // namespace fencing
