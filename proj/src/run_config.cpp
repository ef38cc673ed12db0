#include "fencing/run_config.hpp"

#include <set>
#include <stdexcept>

namespace fencing {
namespace {

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw std::invalid_argument(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void maybe(const Json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

}  // namespace

namespace {
void validate_sysid(const SysIdConfig& s) {
  if (s.reference_ticks < 1 || s.dt <= 0.0 || s.amplitude <= 0.0) {
    throw std::invalid_argument("RunConfig.sysid: ticks, dt and amplitude must be positive");
  }
  if (s.calibration.sigma0 <= 0.0 || s.calibration.max_generations < 1 || s.calibration.restarts < 0) {
    throw std::invalid_argument("RunConfig.sysid: bad calibration options");
  }
}
}  // namespace

void RunConfig::validate() const {
  game.validate();
  ppo.validate();
  if (network.hidden.empty()) throw std::invalid_argument("RunConfig.network: no hidden layers");
  for (int h : network.hidden) {
    if (h < 1) throw std::invalid_argument("RunConfig.network: hidden sizes must be >= 1");
  }
  if (network.obs_size != kObservationSize || network.action_size != kActionSize) {
    throw std::invalid_argument("RunConfig.network: obs/action sizes are fixed by the game");
  }
  phase_one.validate();
  phase_two.validate();
  if (phase_one.phase != 1 || phase_two.phase != 2) {
    throw std::invalid_argument("RunConfig: phase_one/phase_two have the wrong phase number");
  }
  if (rounds < 1) throw std::invalid_argument("RunConfig: rounds must be >= 1");
  if (tournament.games_per_pair < 1) throw std::invalid_argument("RunConfig.tournament: games_per_pair must be >= 1");
  if (style.pca_components < 1 || style.pca_components > kStyleFeatureCount || style.select_count < 1) {
    throw std::invalid_argument("RunConfig.style: bad component/selection count");
  }
  if (heuristic.hold_probability < 0.0 || heuristic.hold_probability > 1.0 ||
      heuristic.standoff_min > heuristic.standoff_max || heuristic.angle_offset_deg < 0.0) {
    throw std::invalid_argument("RunConfig.heuristic: bad parameters");
  }
  validate_sysid(sysid);
  if (out_dir.empty()) throw std::invalid_argument("RunConfig: out_dir is empty");
}

std::uint64_t stream_seed(const RunConfig& config, SeedStream stream) {
  return derive_seed(config.master_seed, static_cast<std::uint64_t>(stream));
}

std::uint64_t round_seed(const RunConfig& config, int round) {
  return derive_seed(stream_seed(config, SeedStream::kCharacterize), static_cast<std::uint64_t>(round));
}

Json phase_config_to_json(const PhaseConfig& p) {
  return Json{{"phase", p.phase},
              {"n_iter", p.n_iter},
              {"blocks", p.blocks},
              {"n_mu", p.n_mu},
              {"n_nu", p.n_nu},
              {"reward_mode", reward_mode_name(p.reward_mode)},
              {"alpha", p.alpha},
              {"rollout_ticks", p.rollout_ticks},
              {"convergence_window", p.convergence_window},
              {"convergence_threshold", p.convergence_threshold},
              {"timeout_updates", p.timeout_updates},
              {"snapshot_cadence", p.snapshot_cadence},
              {"sampling", sampling_name(p.sampling)},
              {"eval_games", p.eval_games}};
}

PhaseConfig phase_config_from_json(const Json& j, PhaseConfig p) {
  check_keys(j, {"phase", "n_iter", "blocks", "n_mu", "n_nu", "reward_mode", "alpha", "rollout_ticks",
                 "convergence_window", "convergence_threshold", "timeout_updates",
                 "snapshot_cadence", "sampling", "eval_games"},
             "phase config");
  maybe(j, "phase", p.phase);
  maybe(j, "n_iter", p.n_iter);
  maybe(j, "blocks", p.blocks);
  maybe(j, "n_mu", p.n_mu);
  maybe(j, "n_nu", p.n_nu);
  if (j.contains("reward_mode")) p.reward_mode = parse_reward_mode(j.at("reward_mode").get<std::string>());
  maybe(j, "alpha", p.alpha);
  maybe(j, "rollout_ticks", p.rollout_ticks);
  maybe(j, "convergence_window", p.convergence_window);
  maybe(j, "convergence_threshold", p.convergence_threshold);
  maybe(j, "timeout_updates", p.timeout_updates);
  maybe(j, "snapshot_cadence", p.snapshot_cadence);
  if (j.contains("sampling")) p.sampling = parse_sampling(j.at("sampling").get<std::string>());
  maybe(j, "eval_games", p.eval_games);
  return p;
}

void to_json(Json& j, const RunConfig& c) {
  j = Json{{"game", c.game},
           {"ppo", {{"clip", c.ppo.clip},
                    {"gamma", c.ppo.gamma},
                    {"lambda", c.ppo.lambda},
                    {"learning_rate", c.ppo.learning_rate},
                    {"epochs", c.ppo.epochs},
                    {"minibatch_size", c.ppo.minibatch_size},
                    {"entropy_coef", c.ppo.entropy_coef},
                    {"value_coef", c.ppo.value_coef},
                    {"max_grad_norm", c.ppo.max_grad_norm}}},
           {"network", {{"hidden", c.network.hidden}, {"initial_log_std", c.network.initial_log_std}}},
           {"phase_one", phase_config_to_json(c.phase_one)},
           {"phase_two", phase_config_to_json(c.phase_two)},
           {"rounds", c.rounds},
           {"tournament", {{"games_per_pair", c.tournament.games_per_pair},
                           {"stochastic", c.tournament.stochastic},
                           {"write_logs", c.tournament_logs}}},
           {"style", {{"pca_components", c.style.pca_components},
                      {"select_count", c.style.select_count}}},
           {"heuristic", {{"angle_offset_deg", c.heuristic.angle_offset_deg},
                          {"standoff_min", c.heuristic.standoff_min},
                          {"standoff_max", c.heuristic.standoff_max},
                          {"hold_probability", c.heuristic.hold_probability},
                          {"sword_length", c.heuristic.sword_length},
                          {"textbook_projection", c.heuristic.textbook_projection}}},
           {"sysid", {{"reference_ticks", c.sysid.reference_ticks},
                      {"dt", c.sysid.dt},
                      {"amplitude", c.sysid.amplitude},
                      {"sigma0", c.sysid.calibration.sigma0},
                      {"max_generations", c.sysid.calibration.max_generations},
                      {"restarts", c.sysid.calibration.restarts},
                      {"target_residual", c.sysid.calibration.target_residual}}},
           {"out_dir", c.out_dir},
           {"master_seed", c.master_seed}};
}

void from_json(const Json& j, RunConfig& c) {
  check_keys(j, {"game", "ppo", "network", "phase_one", "phase_two", "rounds", "tournament", "style",
                 "heuristic", "sysid", "out_dir", "master_seed"},
             "run config");
  if (j.contains("game")) {
    GameConfig g = c.game;
    from_json(j.at("game"), g);
    c.game = g;
  }
  if (j.contains("ppo")) {
    const Json& p = j.at("ppo");
    check_keys(p, {"clip", "gamma", "lambda", "learning_rate", "epochs", "minibatch_size",
                   "entropy_coef", "value_coef", "max_grad_norm"},
               "ppo");
    maybe(p, "clip", c.ppo.clip);
    maybe(p, "gamma", c.ppo.gamma);
    maybe(p, "lambda", c.ppo.lambda);
    maybe(p, "learning_rate", c.ppo.learning_rate);
    maybe(p, "epochs", c.ppo.epochs);
    maybe(p, "minibatch_size", c.ppo.minibatch_size);
    maybe(p, "entropy_coef", c.ppo.entropy_coef);
    maybe(p, "value_coef", c.ppo.value_coef);
    maybe(p, "max_grad_norm", c.ppo.max_grad_norm);
  }
  if (j.contains("network")) {
    const Json& n = j.at("network");
    check_keys(n, {"hidden", "initial_log_std"}, "network");
    maybe(n, "hidden", c.network.hidden);
    maybe(n, "initial_log_std", c.network.initial_log_std);
  }
  if (j.contains("phase_one")) c.phase_one = phase_config_from_json(j.at("phase_one"), c.phase_one);
  if (j.contains("phase_two")) c.phase_two = phase_config_from_json(j.at("phase_two"), c.phase_two);
  maybe(j, "rounds", c.rounds);
  if (j.contains("tournament")) {
    const Json& t = j.at("tournament");
    check_keys(t, {"games_per_pair", "stochastic", "write_logs"}, "tournament");
    maybe(t, "games_per_pair", c.tournament.games_per_pair);
    maybe(t, "stochastic", c.tournament.stochastic);
    maybe(t, "write_logs", c.tournament_logs);
  }
  if (j.contains("style")) {
    const Json& s = j.at("style");
    check_keys(s, {"pca_components", "select_count"}, "style");
    maybe(s, "pca_components", c.style.pca_components);
    maybe(s, "select_count", c.style.select_count);
  }
  if (j.contains("heuristic")) {
    const Json& h = j.at("heuristic");
    check_keys(h, {"angle_offset_deg", "standoff_min", "standoff_max", "hold_probability",
                   "sword_length", "textbook_projection"},
               "heuristic");
    maybe(h, "angle_offset_deg", c.heuristic.angle_offset_deg);
    maybe(h, "standoff_min", c.heuristic.standoff_min);
    maybe(h, "standoff_max", c.heuristic.standoff_max);
    maybe(h, "hold_probability", c.heuristic.hold_probability);
    maybe(h, "sword_length", c.heuristic.sword_length);
    maybe(h, "textbook_projection", c.heuristic.textbook_projection);
  }
  if (j.contains("sysid")) {
    const Json& s = j.at("sysid");
    check_keys(s, {"reference_ticks", "dt", "amplitude", "sigma0", "max_generations", "restarts",
                   "target_residual"},
               "sysid");
    maybe(s, "reference_ticks", c.sysid.reference_ticks);
    maybe(s, "dt", c.sysid.dt);
    maybe(s, "amplitude", c.sysid.amplitude);
    maybe(s, "sigma0", c.sysid.calibration.sigma0);
    maybe(s, "max_generations", c.sysid.calibration.max_generations);
    maybe(s, "restarts", c.sysid.calibration.restarts);
    maybe(s, "target_residual", c.sysid.calibration.target_residual);
  }
  maybe(j, "out_dir", c.out_dir);
  maybe(j, "master_seed", c.master_seed);
}

RunConfig load_run_config(const std::string& path) {
  RunConfig c = Json::parse(read_text_file(path)).get<RunConfig>();
  c.validate();
  return c;
}

}  // namespace fencing
