#include "fencing/agent.hpp"

#include "fencing/geometry.hpp"

namespace fencing {

PolicyAgent::PolicyAgent(std::shared_ptr<const ActorCritic> params, GameConfig config,
                         bool deterministic)
    : params_(std::move(params)), config_(config), deterministic_(deterministic) {}

void PolicyAgent::begin_game(std::uint64_t seed) { rng_.seed(seed); }

AgentAction PolicyAgent::act(const Observation& obs) {
  const SampledAction s =
      sample_action(params_->policy, network_input(obs, config_), rng_, deterministic_);
  return action_from_output(s.action, config_);
}

AgentAction action_towards(const BatPose& current, const BatPose& desired) {
  AgentAction a;
  a.d_pos = desired.center - current.center;
  const Vec3 target_dir =
      desired.dir.dot(current.dir) >= 0.0 ? desired.dir : Vec3(-desired.dir);
  a.d_dir = rotation_between(current.dir, target_dir);
  return a;
}

GameOutcome play_game(const GameConfig& config, Agent& antagonist, Agent& protagonist,
                      std::uint64_t seed, TrajectoryLog* log) {
  GameState state = reset(config, derive_seed(seed, 0));
  antagonist.begin_game(derive_seed(seed, 1));
  protagonist.begin_game(derive_seed(seed, 2));
  if (log) {
    log->config = config;
    log->seed = seed;
    log->ticks.clear();
    log->ticks.reserve(static_cast<std::size_t>(config.horizon_ticks) + 1);
    log->ticks.push_back(make_tick(state, 0, {}));
  }
  bool terminal = false;
  while (!terminal) {
    const AgentAction act_a = antagonist.act(observe(state, Role::kAntagonist, config));
    const AgentAction act_p = protagonist.act(observe(state, Role::kProtagonist, config));
    StepResult r = step(state, act_a, act_p, config);
    state = r.state;
    terminal = r.terminal;
    if (log) log->ticks.push_back(make_tick(state, r.delta, std::move(r.events)));
  }
  return {state.score, state.tick};
}

}  // namespace fencing
