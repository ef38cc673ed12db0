#include <doctest.h>

#include <filesystem>
#include <map>

#include "fencing/coevolution.hpp"
#include "fencing/rewards.hpp"

using namespace fencing;

namespace {

TrainingContext tiny_context() {
  TrainingContext ctx;
  ctx.network.hidden = {8};
  ctx.ppo.minibatch_size = 256;
  ctx.ppo.epochs = 1;
  return ctx;
}

PolicySnapshot make_snapshot(Role role, int phase, int round, int update, Rng& rng) {
  NetworkShape shape;
  shape.hidden = {4};
  PolicySnapshot s;
  s.role = role;
  s.phase = phase;
  s.round = round;
  s.update_index = update;
  s.id = snapshot_id(role, phase, round, update);
  s.params = make_actor_critic(shape, rng);
  return s;
}

}  // namespace

TEST_CASE("rewards") {
  CHECK(tick_reward(1, -0.5, RewardMode::kScoreOnly, 0.01) == 1.0);
  CHECK(tick_reward(1, -0.5, RewardMode::kScoreOnly, 0.01, Role::kProtagonist) == -1.0);
  CHECK(tick_reward(-10, -0.5, RewardMode::kMixed, 0.1) == doctest::Approx(-10.05));
  CHECK(tick_reward(-10, -0.5, RewardMode::kMixed, 0.1, Role::kProtagonist) == doctest::Approx(9.95));
  CHECK(parse_reward_mode(reward_mode_name(RewardMode::kMixed)) == RewardMode::kMixed);
  CHECK_THROWS(parse_reward_mode("dense"));

  const GameConfig c;
  GameState s = reset(c, 1);
  CHECK(shaping_reward(s, Role::kAntagonist, c) <= 0.0);
  CHECK(shaping_reward(s, Role::kProtagonist, c) <= 0.0);
  s.bat_a.pose = BatPose{c.target_center, Vec3::UnitY()};
  CHECK(shaping_reward(s, Role::kAntagonist, c) == doctest::Approx(0.0));
}

TEST_CASE("has_converged") {
  CHECK_FALSE(has_converged({1, 1, 1}, 2, 0.05));
  CHECK(has_converged({1, 1, 1, 1}, 2, 0.05));
  CHECK_FALSE(has_converged({0, 0, 10, 10}, 2, 0.05));
  // Threshold is relative to max(|previous|, 1).
  CHECK(has_converged({100, 100, 104, 104}, 2, 0.05));
  CHECK_FALSE(has_converged({100, 100, 106, 106}, 2, 0.05));
  CHECK(has_converged({0.01, 0.01, 0.03, 0.03}, 2, 0.05));
}

TEST_CASE("policy library bookkeeping") {
  Rng rng(1);
  PolicyLibrary lib;
  lib.add(make_snapshot(Role::kAntagonist, 1, 0, 0, rng));
  lib.add(make_snapshot(Role::kAntagonist, 1, 0, 5, rng));
  lib.add(make_snapshot(Role::kProtagonist, 1, 0, 0, rng));
  CHECK(lib.size() == 3);
  CHECK(lib.snapshots(Role::kAntagonist).size() == 2);
  CHECK(snapshot_id(Role::kAntagonist, 1, 0, 5) == "mu-p1-r0-u00005");
  CHECK(lib.find("mu-p1-r0-u00005") != nullptr);
  CHECK(lib.find("nope") == nullptr);
  CHECK_THROWS(lib.require("nope"));
  CHECK_THROWS(lib.add(make_snapshot(Role::kAntagonist, 1, 0, 5, rng)));
  PolicySnapshot renamed = make_snapshot(Role::kAntagonist, 1, 0, 5, rng);
  renamed.id = "other";
  CHECK_THROWS(lib.add(renamed));  // same lineage key
  CHECK_THROWS(lib.register_pair({1, 0, "mu-p1-r0-u00005", "missing"}));
  lib.register_pair({1, 9, "mu-p1-r0-u00005", "nu-p1-r0-u00000"});

  const auto dir = std::filesystem::temp_directory_path() / "fencing_library_test";
  std::filesystem::remove_all(dir);
  lib.save(dir.string());
  const PolicyLibrary back = PolicyLibrary::load(dir.string());
  CHECK(back.size() == 3);
  REQUIRE(back.pairs().count(1) == 1);
  CHECK(back.pairs().at(1).seed == 9);
  CHECK(flatten(back.require("mu-p1-r0-u00000")->params) ==
        flatten(lib.require("mu-p1-r0-u00000")->params));
  std::filesystem::remove_all(dir);
}

TEST_CASE("sample_opponent") {
  Rng rng(2);
  std::vector<SnapshotPtr> hist;
  for (int u : {0, 7, 3}) {
    hist.push_back(std::make_shared<PolicySnapshot>(make_snapshot(Role::kProtagonist, 1, 0, u, rng)));
  }
  CHECK(sample_opponent(hist, OpponentSampling::kLatest, rng)->update_index == 7);
  CHECK_THROWS(sample_opponent({}, OpponentSampling::kUniformHistory, rng));

  std::map<int, int> counts;
  const int n = 60000;
  for (int i = 0; i < n; ++i) ++counts[sample_opponent(hist, OpponentSampling::kUniformHistory, rng)->update_index];
  const double p = 1.0 / 3.0, sigma = std::sqrt(n * p * (1 - p));
  for (const auto& [k, c] : counts) CHECK(std::abs(c - n * p) < 5 * sigma);
}

TEST_CASE("collect_rollouts is seeded and well formed") {
  const TrainingContext ctx = tiny_context();
  Rng rng(3);
  const ActorCritic ac = make_actor_critic(ctx.network, rng);
  const AgentFactory stationary = [] { return std::make_unique<StationaryAgent>(); };
  const RolloutResult a = collect_rollouts(ctx.game, ac, Role::kAntagonist, stationary, 2500,
                                           RewardMode::kMixed, 0.01, 11);
  const RolloutResult b = collect_rollouts(ctx.game, ac, Role::kAntagonist, stationary, 2500,
                                           RewardMode::kMixed, 0.01, 11);
  CHECK(a.batch.size() == 4000u);  // whole games only
  CHECK(a.stats.game_scores.size() == 2u);
  CHECK(a.batch.reward == b.batch.reward);
  CHECK(a.batch.log_prob == b.batch.log_prob);
  CHECK(a.batch.terminal[1999] == 1);
  CHECK(a.batch.terminal[3999] == 1);
  CHECK(a.batch.terminal[1000] == 0);
  // Score-only rewards sum to the learner-perspective game score.
  const RolloutResult p = collect_rollouts(ctx.game, ac, Role::kProtagonist, stationary, 2000,
                                           RewardMode::kScoreOnly, 0.0, 4);
  double sum = 0.0;
  for (double r : p.batch.reward) sum += r;
  CHECK(sum == doctest::Approx(-p.stats.game_scores[0]));
  CHECK(p.stats.mean_score == doctest::Approx(-p.stats.game_scores[0]));
}

TEST_CASE("train_block: timeout, cadence and lineage") {
  const TrainingContext ctx = tiny_context();
  PhaseConfig phase = PhaseConfig::phase_one_defaults();
  phase.rollout_ticks = 2000;
  phase.timeout_updates = 3;
  phase.snapshot_cadence = 2;
  PolicyLibrary lib;
  Learner l;
  l.role = Role::kAntagonist;
  Rng rng(4);
  l.params = make_actor_critic(ctx.network, rng);
  const AgentFactory stationary = [] { return std::make_unique<StationaryAgent>(); };
  const BlockResult r = train_block(ctx, l, stationary, "stationary", phase, 10, 0, 5, lib);
  CHECK(r.record.updates_run == 3);
  CHECK(r.record.score_curve.size() == 3u);
  CHECK(l.update_index == 3);
  // Cadence 2 plus the final update.
  CHECK(r.record.snapshot_ids == std::vector<std::string>{"mu-p1-r0-u00002", "mu-p1-r0-u00003"});
  CHECK(lib.size() == 2);
  CHECK_FALSE(r.record.pre_eval.has_value());

  // Same inputs, same parameters.
  PolicyLibrary lib2;
  Learner l2;
  l2.role = Role::kAntagonist;
  Rng rng2(4);
  l2.params = make_actor_critic(ctx.network, rng2);
  train_block(ctx, l2, stationary, "stationary", phase, 10, 0, 5, lib2);
  CHECK(flatten(l2.params) == flatten(l.params));
}

TEST_CASE("phase schedules") {
  const TrainingContext ctx = tiny_context();
  PhaseConfig one = PhaseConfig::phase_one_defaults();
  one.n_iter = 1;
  one.n_mu = one.n_nu = 1;
  one.rollout_ticks = 1000;
  PolicyLibrary lib;
  const PhaseOneResult p1 = run_phase_one(ctx, one, 3, lib);
  REQUIRE(p1.blocks.size() == 2u);
  CHECK(p1.blocks[0].learner == Role::kAntagonist);
  CHECK(p1.blocks[0].opponent_id == "nu-p1-r0-u00000");
  CHECK(p1.blocks[1].learner == Role::kProtagonist);
  CHECK(p1.blocks[1].opponent_id == "mu-p1-r0-u00001");  // latest after block 0
  CHECK(p1.warm_antagonist_id == "mu-p1-r0-u00001");
  CHECK(p1.warm_protagonist_id == "nu-p1-r0-u00001");

  PhaseConfig two = PhaseConfig::phase_two_defaults();
  CHECK(two.blocks == 35);
  CHECK(two.reward_mode == RewardMode::kScoreOnly);
  CHECK(two.sampling == OpponentSampling::kUniformHistory);
  two.blocks = 5;
  two.n_mu = two.n_nu = 1;
  two.rollout_ticks = 1000;
  const PhaseTwoResult p2 = run_phase_two(ctx, two, p1.warm_antagonist_id, p1.warm_protagonist_id, 1, 77, lib);
  REQUIRE(p2.blocks.size() == 5u);
  for (std::size_t b = 0; b < 5; ++b) {
    CHECK(p2.blocks[b].learner == (b % 2 == 0 ? Role::kAntagonist : Role::kProtagonist));
    CHECK(p2.blocks[b].reward_mode == RewardMode::kScoreOnly);
    CHECK(p2.blocks[b].opponent_index < p2.blocks[b].history_size);
    const SnapshotPtr opp = lib.require(p2.blocks[b].opponent_id);
    CHECK((opp->phase == 1 || opp->round == 1));
  }
  CHECK(p2.antagonist_id == "mu-p2-r1-u00004");
  CHECK(p2.protagonist_id == "nu-p2-r1-u00003");
  CHECK(lib.require(p2.antagonist_id)->parent_id == p1.warm_antagonist_id);
  REQUIRE(lib.pairs().count(1) == 1);
  CHECK(lib.pairs().at(1).protagonist_id == p2.protagonist_id);
  CHECK_THROWS(run_phase_two(ctx, two, p1.warm_protagonist_id, p1.warm_antagonist_id, 2, 1, lib));
  CHECK_THROWS(run_phase_two(ctx, one, p1.warm_antagonist_id, p1.warm_protagonist_id, 2, 1, lib));
}
