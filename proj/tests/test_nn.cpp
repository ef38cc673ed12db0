#include <doctest.h>

#include <filesystem>

#include "fencing/snapshot_io.hpp"
#include "oracles.hpp"

using namespace fencing;

namespace {

RolloutBatch single_sample(double log_prob_new, double log_prob_old, const ActorCritic& ac,
                           const Eigen::VectorXd& obs, const Eigen::VectorXd& action) {
  RolloutBatch b;
  b.obs = {obs};
  b.actions = {action};
  b.log_prob = {log_prob_old};
  b.reward = {0.0};
  b.value = {0.0};
  b.terminal = {1};
  (void)log_prob_new;
  (void)ac;
  return b;
}

// GAE only reads rewards, values and terminals; fill the rest.
void pad(RolloutBatch& b) {
  const std::size_t n = b.reward.size();
  b.obs.assign(n, Eigen::VectorXd::Zero(1));
  b.actions.assign(n, Eigen::VectorXd::Zero(1));
  b.log_prob.assign(n, 0.0);
}

}  // namespace

TEST_CASE("mlp forward matches a hand computation") {
  MlpParams p;
  DenseLayer l1{Eigen::MatrixXd(2, 2), Eigen::VectorXd(2)};
  l1.weight << 1, -1, 0.5, 2;
  l1.bias << 0.1, -0.2;
  DenseLayer l2{Eigen::MatrixXd(1, 2), Eigen::VectorXd(1)};
  l2.weight << 3, -1;
  l2.bias << 0.5;
  p.layers = {l1, l2};
  Eigen::VectorXd x(2);
  x << 0.3, -0.4;
  const double h1 = std::tanh(0.3 + 0.4 + 0.1), h2 = std::tanh(0.15 - 0.8 - 0.2);
  CHECK(forward_mlp(p, x)[0] == doctest::Approx(3 * h1 - h2 + 0.5));
  CHECK(p.parameter_count() == 9);
  CHECK_THROWS_AS(forward_mlp(p, Eigen::VectorXd(3)), std::invalid_argument);
}

TEST_CASE("mlp backward agrees with finite differences") {
  Rng rng(2);
  MlpParams p = make_mlp({4, 5, 3, 2}, rng, 1.0, 1.0);
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(4, 7);
  Eigen::MatrixXd w = Eigen::MatrixXd::Random(2, 7);  // loss = sum(w .* out)
  MlpCache cache;
  forward_mlp_batch(p, x, &cache);
  MlpParams g = zeros_like(p);
  backward_mlp_batch(p, cache, w, g);
  Eigen::VectorXd flat(p.parameter_count()), grad(p.parameter_count());
  flatten_into(p, flat, 0);
  flatten_into(g, grad, 0);
  const double h = 1e-6;
  for (Eigen::Index i = 0; i < flat.size(); ++i) {
    MlpParams q = p;
    Eigen::VectorXd f = flat;
    f[i] += h;
    unflatten_from(q, f, 0);
    const double up = (forward_mlp_batch(q, x, nullptr).array() * w.array()).sum();
    f[i] -= 2 * h;
    unflatten_from(q, f, 0);
    const double down = (forward_mlp_batch(q, x, nullptr).array() * w.array()).sum();
    REQUIRE(grad[i] == doctest::Approx((up - down) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("flatten/unflatten round trip and block layout") {
  Rng rng(4);
  const ActorCritic ac = make_actor_critic(NetworkShape{}, rng);
  const Eigen::VectorXd flat = flatten(ac);
  CHECK(flat.size() == ac.parameter_count());
  ActorCritic copy = make_actor_critic(NetworkShape{}, rng);
  unflatten(copy, flat);
  CHECK(flatten(copy) == flat);
  const auto blocks = parameter_blocks(ac);
  CHECK(blocks.front().name == "policy.w0");
  Eigen::Index next = 0;
  bool saw_log_std = false;
  for (const auto& b : blocks) {
    CHECK(b.offset == next);
    next += b.size;
    if (b.name == "log_std") {
      saw_log_std = true;
      CHECK(b.size == kActionSize);
    }
  }
  CHECK(saw_log_std);
  CHECK(next == flat.size());
  CHECK(ac.policy.log_std.isApproxToConstant(-0.7));
}

TEST_CASE("gaussian log-density integrates to one and matches the closed form") {
  Eigen::VectorXd mean(1), log_std(1);
  mean << 0.3;
  log_std << -0.4;
  const double sigma = std::exp(-0.4);
  // Trapezoid over +-12 sigma.
  const int n = 20000;
  const double lo = 0.3 - 12 * sigma, hi = 0.3 + 12 * sigma, dx = (hi - lo) / n;
  double mass = 0.0, ent = 0.0;
  for (int i = 0; i <= n; ++i) {
    Eigen::VectorXd a(1);
    a << lo + i * dx;
    const double lp = gaussian_log_prob(mean, log_std, a);
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    mass += w * std::exp(lp) * dx;
    ent -= w * std::exp(lp) * lp * dx;
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(gaussian_entropy(log_std) == doctest::Approx(ent).epsilon(1e-8));

  // Diagonal: the joint density is the product of the marginals.
  Eigen::VectorXd m(3), s(3), a(3);
  m << 0.1, -0.2, 0.3;
  s << -0.5, 0.0, 0.2;
  a << 0.4, 0.1, -1.0;
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    sum += gaussian_log_prob(m.segment(i, 1), s.segment(i, 1), a.segment(i, 1));
  }
  CHECK(gaussian_log_prob(m, s, a) == doctest::Approx(sum));
}

TEST_CASE("sample_action: deterministic mode and empirical moments") {
  Rng rng(8);
  const ActorCritic ac = make_actor_critic(NetworkShape{}, rng);
  Eigen::VectorXd obs = Eigen::VectorXd::Constant(kObservationSize, 0.1);
  const Eigen::VectorXd mean = forward_mlp(ac.policy.mean_net, obs);
  const SampledAction det = sample_action(ac.policy, obs, rng, true);
  CHECK(det.action == mean);
  CHECK(det.log_prob == doctest::Approx(gaussian_log_prob(mean, ac.policy.log_std, mean)));
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(kActionSize), sq = Eigen::VectorXd::Zero(kActionSize);
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const SampledAction s = sample_action(ac.policy, obs, rng);
    REQUIRE(s.log_prob == doctest::Approx(gaussian_log_prob(mean, ac.policy.log_std, s.action)));
    sum += s.action - mean;
    sq += (s.action - mean).cwiseAbs2();
  }
  const double sigma = std::exp(-0.7);
  for (int k = 0; k < kActionSize; ++k) {
    CHECK(std::abs(sum[k] / n) < 5 * sigma / std::sqrt(n));
    CHECK(std::sqrt(sq[k] / n) == doctest::Approx(sigma).epsilon(0.03));
  }
}

TEST_CASE("network_input and action_from_output") {
  const GameConfig c;
  const GameState s = reset(c, 1);
  const Eigen::VectorXd x = network_input(observe(s, Role::kAntagonist, c), c);
  CHECK(x.size() == kObservationSize);
  CHECK(x.cwiseAbs().maxCoeff() < 3.0);
  Eigen::VectorXd out(6);
  out << 1, -0.5, 0, 0.2, 0, -1;
  const AgentAction a = action_from_output(out, c);
  CHECK(a.d_pos == Vec3(1, -0.5, 0) * c.d_pos_max);
  CHECK(a.d_dir == Vec3(0.2, 0, -1) * c.d_dir_max);
  CHECK_THROWS(action_from_output(Eigen::VectorXd(5), c));
}

TEST_CASE("clipped surrogate hand example: rho 1.5, eps 0.2, A 1 -> 1.2") {
  Rng rng(6);
  NetworkShape shape;
  shape.obs_size = 2;
  shape.action_size = 1;
  shape.hidden = {3};
  const ActorCritic ac = make_actor_critic(shape, rng);
  Eigen::VectorXd obs(2);
  obs << 0.2, -0.1;
  const SampledAction s = sample_action(ac.policy, obs, rng);
  RolloutBatch b = single_sample(s.log_prob, s.log_prob - std::log(1.5), ac, obs, s.action);
  PpoConfig cfg;
  cfg.value_coef = 0.0;
  const LossResult r = ppo_loss_and_grad(ac, b, {1.0}, {0.0}, cfg);
  CHECK(r.surrogate == doctest::Approx(1.2));
  CHECK(r.loss == doctest::Approx(-1.2));
  CHECK(r.clip_fraction == 1.0);
  // Clipped side has no policy gradient.
  const auto blocks = parameter_blocks(ac);
  Eigen::Index policy_end = 0;
  for (const auto& blk : blocks) {
    if (blk.name == "log_std") policy_end = blk.offset + blk.size;
  }
  CHECK(r.gradient.head(policy_end).norm() == 0.0);
  CHECK(r.approx_kl == doctest::Approx((1.5 - 1.0) - std::log(1.5)));

  // Negative advantage with rho 1.5: min(-1.5, -1.2) = -1.5, unclipped.
  const LossResult neg = ppo_loss_and_grad(ac, b, {-1.0}, {0.0}, cfg);
  CHECK(neg.surrogate == doctest::Approx(-1.5));
  CHECK(neg.gradient.head(policy_end).norm() > 0.0);
}

TEST_CASE("PPO analytic gradient matches finite differences") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto gc = oracle::make_gradient_case(seed);
    CHECK(oracle::ppo_gradient_relative_error(gc) < 1e-4);
  }
}

TEST_CASE("GAE: hand example, terminal cut and linearity") {
  RolloutBatch b;
  b.reward = {1.0, 0.0, 2.0};
  b.value = {0.5, 0.25, 1.0};
  b.terminal = {0, 1, 0};
  pad(b);
  const double g = 0.9, l = 0.8, boot = 3.0;
  const GaeResult r = gae_advantages(b, g, l, boot);
  const double d2 = 2.0 + g * boot - 1.0;
  const double d1 = 0.0 - 0.25;  // terminal: no bootstrap
  const double d0 = 1.0 + g * 0.25 - 0.5;
  CHECK(r.advantages[2] == doctest::Approx(d2));
  CHECK(r.advantages[1] == doctest::Approx(d1));
  CHECK(r.advantages[0] == doctest::Approx(d0 + g * l * d1));
  for (int i = 0; i < 3; ++i) CHECK(r.returns[i] == doctest::Approx(r.advantages[i] + b.value[i]));

  // lambda = 1, V = 0: advantages are discounted returns.
  RolloutBatch mc;
  mc.reward = {1, 1, 1};
  mc.value = {0, 0, 0};
  mc.terminal = {0, 0, 1};
  pad(mc);
  const GaeResult m = gae_advantages(mc, 0.5, 1.0);
  CHECK(m.advantages[0] == doctest::Approx(1.75));

  // Linear in rewards when values are zero.
  Rng rng(3);
  RolloutBatch x, y, sum;
  for (int i = 0; i < 50; ++i) {
    const double rx = standard_normal(rng), ry = standard_normal(rng);
    const std::uint8_t t = i % 17 == 16;
    for (auto* bb : {&x, &y, &sum}) {
      bb->value.push_back(0.0);
      bb->terminal.push_back(t);
    }
    x.reward.push_back(rx);
    y.reward.push_back(ry);
    sum.reward.push_back(2.0 * rx - 3.0 * ry);
  }
  pad(x);
  pad(y);
  pad(sum);
  const auto ax = gae_advantages(x, 0.99, 0.95).advantages;
  const auto ay = gae_advantages(y, 0.99, 0.95).advantages;
  const auto as = gae_advantages(sum, 0.99, 0.95).advantages;
  for (int i = 0; i < 50; ++i) REQUIRE(as[i] == doctest::Approx(2.0 * ax[i] - 3.0 * ay[i]));
}

TEST_CASE("normalize_advantages") {
  const auto n = normalize_advantages({1.0, 2.0, 3.0, 6.0});
  double mean = 0.0, var = 0.0;
  for (double v : n) mean += v / 4;
  for (double v : n) var += (v - mean) * (v - mean) / 4;
  CHECK(mean == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(var == doctest::Approx(1.0).epsilon(1e-6));
  const auto c = normalize_advantages({2.0, 2.0});
  CHECK(c[0] == 0.0);
}

TEST_CASE("ppo_update raises the surrogate and is reproducible") {
  const auto gc = oracle::make_gradient_case(21);
  PpoConfig cfg = gc.config;
  cfg.minibatch_size = 8;
  cfg.learning_rate = 1e-3;
  RolloutBatch batch = gc.batch;
  // Make the stored returns consistent with the rewards.
  ActorCritic a = gc.ac, b = gc.ac;
  AdamState sa, sb;
  Rng ra(1), rb(1);
  const PpoStats st = ppo_update(a, batch, cfg, sa, ra);
  ppo_update(b, batch, cfg, sb, rb);
  CHECK(flatten(a) == flatten(b));
  CHECK(st.surrogate_after > st.surrogate_before);
  CHECK(st.kl >= 0.0);
  CHECK(st.clip_fraction >= 0.0);
  CHECK(st.clip_fraction <= 1.0);
  CHECK(sa.step > 0);
}

TEST_CASE("ppo rejects inconsistent batches") {
  const auto gc = oracle::make_gradient_case(3);
  RolloutBatch bad = gc.batch;
  bad.reward.pop_back();
  CHECK_THROWS(bad.validate());
  PpoConfig cfg;
  cfg.clip = -1.0;
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("snapshot roundtrip") {
  Rng rng(12);
  PolicySnapshot s;
  s.id = "mu-p1-r0-u00005";
  s.role = Role::kAntagonist;
  s.update_index = 5;
  s.parent_id = "mu-p1-r0-u00000";
  s.params = make_actor_critic(NetworkShape{}, rng);
  const auto dir = std::filesystem::temp_directory_path() / "fencing_snapshot_test";
  std::filesystem::remove_all(dir);
  const std::string path = (dir / "s.json").string();
  save_snapshot(path, s);
  const PolicySnapshot back = load_snapshot(path);
  CHECK(back.id == s.id);
  CHECK(back.parent_id == s.parent_id);
  CHECK(back.role == s.role);
  CHECK(flatten(back.params) == flatten(s.params));

  Json j = snapshot_to_json(s);
  j["schema_version"] = 7;
  CHECK_THROWS(snapshot_from_json(j));
  Json wrong = snapshot_to_json(s);
  wrong["policy"]["layers"][0]["bias"].erase(0);
  CHECK_THROWS(snapshot_from_json(wrong));
  std::filesystem::remove_all(dir);
}
