#include "fencing/coevolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fencing {
namespace {

double mean_of(std::vector<double>::const_iterator first,
               std::vector<double>::const_iterator last) {
  return std::accumulate(first, last, 0.0) / static_cast<double>(last - first);
}

SnapshotPtr emit_snapshot(const Learner& learner, int phase, int round,
                          PolicyLibrary& library) {
  PolicySnapshot s;
  s.id = snapshot_id(learner.role, phase, round, learner.update_index);
  s.role = learner.role;
  s.phase = phase;
  s.round = round;
  s.update_index = learner.update_index;
  s.parent_id = learner.parent_id;
  s.params = learner.params;
  return library.add(std::move(s));
}

std::vector<SnapshotPtr> round_history(const PolicyLibrary& library, Role role, int round) {
  std::vector<SnapshotPtr> out;
  for (const auto& s : library.snapshots(role)) {
    if (s->phase == 1 || (s->phase == 2 && s->round == round)) out.push_back(s);
  }
  return out;
}

}  // namespace

void PhaseConfig::validate() const {
  if (phase != 1 && phase != 2) throw std::invalid_argument("PhaseConfig: phase must be 1 or 2");
  if (phase == 1 && n_iter < 1) throw std::invalid_argument("PhaseConfig: n_iter must be >= 1");
  if (phase == 2 && blocks < 1) throw std::invalid_argument("PhaseConfig: blocks must be >= 1");
  if (n_mu < 0 || n_nu < 0) throw std::invalid_argument("PhaseConfig: negative update count");
  if (alpha < 0.0) throw std::invalid_argument("PhaseConfig: alpha must be >= 0");
  if (rollout_ticks <= 0) throw std::invalid_argument("PhaseConfig: rollout_ticks must be > 0");
  if (convergence_window < 1 || timeout_updates < 0 || snapshot_cadence < 1) {
    throw std::invalid_argument("PhaseConfig: bad window/timeout/cadence");
  }
}

PhaseConfig PhaseConfig::phase_one_defaults() { return PhaseConfig{}; }

PhaseConfig PhaseConfig::phase_two_defaults() {
  PhaseConfig c;
  c.phase = 2;
  c.n_iter = 0;
  c.blocks = 35;
  c.n_mu = 4;
  c.n_nu = 4;
  c.reward_mode = RewardMode::kScoreOnly;
  c.alpha = 0.0;
  c.timeout_updates = 4;
  c.snapshot_cadence = 1;
  c.sampling = OpponentSampling::kUniformHistory;
  return c;
}

Json block_record_to_json(const BlockRecord& r) {
  Json j{{"index", r.index},
         {"phase", r.phase},
         {"round", r.round},
         {"learner", role_name(r.learner)},
         {"opponent", r.opponent_id},
         {"history_size", r.history_size},
         {"opponent_index", r.opponent_index},
         {"reward_mode", reward_mode_name(r.reward_mode)},
         {"sampling", sampling_name(r.sampling)},
         {"seed", r.seed},
         {"updates_run", r.updates_run},
         {"converged", r.converged},
         {"score_curve", r.score_curve},
         {"snapshots", r.snapshot_ids}};
  j["pre_eval"] = r.pre_eval ? Json(*r.pre_eval) : Json(nullptr);
  j["post_eval"] = r.post_eval ? Json(*r.post_eval) : Json(nullptr);
  return j;
}

bool has_converged(const std::vector<double>& curve, int window, double threshold) {
  const auto w = static_cast<std::ptrdiff_t>(window);
  if (static_cast<std::ptrdiff_t>(curve.size()) < 2 * w) return false;
  const double recent = mean_of(curve.end() - w, curve.end());
  const double before = mean_of(curve.end() - 2 * w, curve.end() - w);
  return std::abs(recent - before) < threshold * std::max(std::abs(before), 1.0);
}

AgentFactory snapshot_opponent(SnapshotPtr snapshot, const GameConfig& game,
                               bool deterministic) {
  auto params = std::shared_ptr<const ActorCritic>(snapshot, &snapshot->params);
  return [params, game, deterministic] {
    return std::make_unique<PolicyAgent>(params, game, deterministic);
  };
}

BlockResult train_block(const TrainingContext& ctx, Learner& learner,
                        const AgentFactory& opponent, const std::string& opponent_id,
                        const PhaseConfig& phase, int n_updates, int round,
                        std::uint64_t seed, PolicyLibrary& library) {
  phase.validate();
  BlockResult out;
  BlockRecord& rec = out.record;
  rec.phase = phase.phase;
  rec.round = round;
  rec.learner = learner.role;
  rec.opponent_id = opponent_id;
  rec.reward_mode = phase.reward_mode;
  rec.sampling = phase.sampling;
  rec.seed = seed;

  const int limit = std::min(n_updates, phase.timeout_updates);
  Rng update_rng(derive_seed(seed, 0xADA));
  const std::uint64_t eval_seed = derive_seed(seed, 0xE7A1);
  if (phase.eval_games > 0 && limit > 0) {
    rec.pre_eval = evaluate(ctx.game, learner.params, learner.role, opponent,
                            phase.eval_games, eval_seed);
  }

  bool emitted_last = false;
  for (int u = 0; u < limit; ++u) {
    const RolloutResult ro = collect_rollouts(
        ctx.game, learner.params, learner.role, opponent, phase.rollout_ticks,
        phase.reward_mode, phase.alpha, derive_seed(seed, static_cast<std::uint64_t>(u) + 1));
    ppo_update(learner.params, ro.batch, ctx.ppo, learner.adam, update_rng);
    ++learner.update_index;
    ++rec.updates_run;
    rec.score_curve.push_back(ro.stats.mean_score);

    emitted_last = false;
    if (rec.updates_run % phase.snapshot_cadence == 0) {
      out.snapshots.push_back(emit_snapshot(learner, phase.phase, round, library));
      emitted_last = true;
    }
    if (has_converged(rec.score_curve, phase.convergence_window,
                      phase.convergence_threshold)) {
      rec.converged = true;
      break;
    }
  }
  if (rec.updates_run > 0 && !emitted_last) {
    out.snapshots.push_back(emit_snapshot(learner, phase.phase, round, library));
  }
  for (const auto& s : out.snapshots) rec.snapshot_ids.push_back(s->id);

  if (phase.eval_games > 0 && limit > 0) {
    rec.post_eval = evaluate(ctx.game, learner.params, learner.role, opponent,
                             phase.eval_games, eval_seed);
  }
  return out;
}

PhaseOneResult run_phase_one(const TrainingContext& ctx, const PhaseConfig& phase,
                             std::uint64_t seed, PolicyLibrary& library) {
  phase.validate();
  if (phase.phase != 1) throw std::invalid_argument("run_phase_one: phase config is not phase 1");
  PhaseOneResult out;
  Learner* learners[2] = {&out.antagonist, &out.protagonist};
  for (int r = 0; r < 2; ++r) {
    Learner& l = *learners[r];
    l.role = r == 0 ? Role::kAntagonist : Role::kProtagonist;
    Rng init_rng(derive_seed(seed, 100 + static_cast<std::uint64_t>(r)));
    l.params = make_actor_critic(ctx.network, init_rng);
    emit_snapshot(l, 1, 0, library);
  }

  int block_index = 0;
  for (int i = 0; i < phase.n_iter; ++i) {
    for (int r = 0; r < 2; ++r) {
      Learner& l = *learners[r];
      const Role opp_role = opponent_of(l.role);
      Rng unused;
      const auto& history = library.snapshots(opp_role);
      const SnapshotPtr opp = sample_opponent(history, OpponentSampling::kLatest, unused);
      const int n = l.role == Role::kAntagonist ? phase.n_mu : phase.n_nu;
      BlockResult br = train_block(ctx, l, snapshot_opponent(opp, ctx.game), opp->id,
                                   phase, n, 0,
                                   derive_seed(seed, 1000 + static_cast<std::uint64_t>(block_index)),
                                   library);
      br.record.index = block_index++;
      br.record.history_size = static_cast<int>(history.size());
      br.record.opponent_index =
          static_cast<int>(std::find(history.begin(), history.end(), opp) - history.begin());
      out.blocks.push_back(std::move(br.record));
    }
  }
  Rng unused;
  out.warm_antagonist_id =
      sample_opponent(library.snapshots(Role::kAntagonist), OpponentSampling::kLatest, unused)->id;
  out.warm_protagonist_id =
      sample_opponent(library.snapshots(Role::kProtagonist), OpponentSampling::kLatest, unused)->id;
  return out;
}

PhaseTwoResult run_phase_two(const TrainingContext& ctx, const PhaseConfig& phase,
                             const std::string& warm_antagonist_id,
                             const std::string& warm_protagonist_id, int round,
                             std::uint64_t round_seed, PolicyLibrary& library) {
  phase.validate();
  if (phase.phase != 2) throw std::invalid_argument("run_phase_two: phase config is not phase 2");
  if (round < 1) throw std::invalid_argument("run_phase_two: rounds are numbered from 1");

  Learner learners[2];
  const std::string warm_ids[2] = {warm_antagonist_id, warm_protagonist_id};
  for (int r = 0; r < 2; ++r) {
    const SnapshotPtr warm = library.require(warm_ids[r]);
    learners[r].role = warm->role;
    learners[r].params = warm->params;
    learners[r].update_index = warm->update_index;
    learners[r].parent_id = warm->id;
  }
  if (learners[0].role != Role::kAntagonist || learners[1].role != Role::kProtagonist) {
    throw std::invalid_argument("run_phase_two: warm pair roles are swapped");
  }

  PhaseTwoResult out;
  Rng sampler(derive_seed(round_seed, 0x5A3));
  std::string final_ids[2] = {warm_ids[0], warm_ids[1]};
  for (int b = 0; b < phase.blocks; ++b) {
    Learner& l = learners[b % 2];
    const Role opp_role = opponent_of(l.role);
    const std::vector<SnapshotPtr> history = round_history(library, opp_role, round);
    const SnapshotPtr opp = sample_opponent(history, phase.sampling, sampler);
    const int n = l.role == Role::kAntagonist ? phase.n_mu : phase.n_nu;
    BlockResult br = train_block(ctx, l, snapshot_opponent(opp, ctx.game), opp->id, phase,
                                 n, round,
                                 derive_seed(round_seed, 1000 + static_cast<std::uint64_t>(b)),
                                 library);
    br.record.index = b;
    br.record.history_size = static_cast<int>(history.size());
    br.record.opponent_index =
        static_cast<int>(std::find(history.begin(), history.end(), opp) - history.begin());
    if (!br.snapshots.empty()) final_ids[b % 2] = br.snapshots.back()->id;
    out.blocks.push_back(std::move(br.record));
  }
  out.antagonist_id = final_ids[0];
  out.protagonist_id = final_ids[1];
  library.register_pair({round, round_seed, out.antagonist_id, out.protagonist_id});
  return out;
}

}  // namespace fencing
