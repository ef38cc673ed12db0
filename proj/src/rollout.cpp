#include "fencing/rollout.hpp"

#include <thread>

#include "fencing/parallel.hpp"

namespace fencing {
namespace {

struct GameSamples {
  RolloutBatch batch;
  int score = 0;
};

GameSamples play_learning_game(const GameConfig& config, const ActorCritic& learner,
                               Role learner_role, Agent& opponent, RewardMode mode,
                               double alpha, std::uint64_t seed) {
  GameSamples out;
  const auto n = static_cast<std::size_t>(config.horizon_ticks);
  RolloutBatch& b = out.batch;
  b.obs.reserve(n);
  b.actions.reserve(n);
  b.log_prob.reserve(n);
  b.reward.reserve(n);
  b.value.reserve(n);
  b.terminal.reserve(n);

  GameState state = reset(config, derive_seed(seed, 0));
  Rng rng(derive_seed(seed, 1));
  opponent.begin_game(derive_seed(seed, 2));
  const Role opp_role = opponent_of(learner_role);

  bool terminal = false;
  while (!terminal) {
    Eigen::VectorXd x = network_input(observe(state, learner_role, config), config);
    SampledAction s = sample_action(learner.policy, x, rng);
    const double v = value_of(learner.value, x);
    const AgentAction mine = action_from_output(s.action, config);
    const AgentAction theirs = opponent.act(observe(state, opp_role, config));
    StepResult r = learner_role == Role::kAntagonist ? step(state, mine, theirs, config)
                                                     : step(state, theirs, mine, config);
    state = r.state;
    terminal = r.terminal;
    const double shaping =
        mode == RewardMode::kMixed ? shaping_reward(state, learner_role, config) : 0.0;
    b.obs.push_back(std::move(x));
    b.actions.push_back(std::move(s.action));
    b.log_prob.push_back(s.log_prob);
    b.value.push_back(v);
    b.reward.push_back(tick_reward(r.delta, shaping, mode, alpha, learner_role));
    b.terminal.push_back(terminal ? 1 : 0);
  }
  out.score = state.score;
  return out;
}

}  // namespace

int worker_count(int jobs) {
  const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return std::max(1, std::min(hw, jobs));
}

RolloutResult collect_rollouts(const GameConfig& config, const ActorCritic& learner,
                               Role learner_role, const AgentFactory& opponent,
                               int n_ticks, RewardMode mode, double alpha,
                               std::uint64_t seed) {
  config.validate();
  const int games = std::max(1, (n_ticks + config.horizon_ticks - 1) / config.horizon_ticks);
  std::vector<GameSamples> per_game(static_cast<std::size_t>(games));
  parallel_for(games, worker_count(games), [&](int g) {
    auto opp = opponent();
    per_game[static_cast<std::size_t>(g)] =
        play_learning_game(config, learner, learner_role, *opp, mode, alpha,
                           derive_seed(seed, static_cast<std::uint64_t>(g)));
  });

  RolloutResult out;
  double total = 0.0;
  for (auto& g : per_game) {
    out.batch.append(g.batch);
    out.stats.game_scores.push_back(g.score);
    total += learner_role == Role::kAntagonist ? g.score : -g.score;
  }
  out.stats.mean_score = total / games;
  return out;
}

double evaluate(const GameConfig& config, const ActorCritic& learner, Role learner_role,
                const AgentFactory& opponent, int games, std::uint64_t seed,
                bool stochastic) {
  if (games <= 0) return 0.0;
  auto shared = std::make_shared<const ActorCritic>(learner);
  std::vector<int> scores(static_cast<std::size_t>(games));
  parallel_for(games, worker_count(games), [&](int g) {
    PolicyAgent me(shared, config, !stochastic);
    auto opp = opponent();
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(g));
    const GameOutcome o = learner_role == Role::kAntagonist
                              ? play_game(config, me, *opp, s)
                              : play_game(config, *opp, me, s);
    scores[static_cast<std::size_t>(g)] = o.score;
  });
  double total = 0.0;
  for (int s : scores) total += learner_role == Role::kAntagonist ? s : -s;
  return total / games;
}

}  // namespace fencing
