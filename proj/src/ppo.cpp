#include "fencing/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fencing {
namespace {

const double kLog2Pi = std::log(2.0 * M_PI);

Eigen::MatrixXd gather(const std::vector<Eigen::VectorXd>& rows,
                       std::span<const std::size_t> indices) {
  Eigen::MatrixXd out(rows[indices[0]].size(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) out.col(j) = rows[indices[j]];
  return out;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

}  // namespace

void RolloutBatch::validate() const {
  const std::size_t n = reward.size();
  if (obs.size() != n || actions.size() != n || log_prob.size() != n ||
      value.size() != n || terminal.size() != n) {
    throw std::invalid_argument("RolloutBatch: per-tick arrays differ in length");
  }
}

void RolloutBatch::append(const RolloutBatch& other) {
  obs.insert(obs.end(), other.obs.begin(), other.obs.end());
  actions.insert(actions.end(), other.actions.begin(), other.actions.end());
  log_prob.insert(log_prob.end(), other.log_prob.begin(), other.log_prob.end());
  reward.insert(reward.end(), other.reward.begin(), other.reward.end());
  value.insert(value.end(), other.value.begin(), other.value.end());
  terminal.insert(terminal.end(), other.terminal.begin(), other.terminal.end());
}

void PpoConfig::validate() const {
  if (!(clip > 0.0 && clip < 1.0)) throw std::invalid_argument("PpoConfig: clip must be in (0,1)");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("PpoConfig: gamma must be in (0,1]");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("PpoConfig: lambda must be in [0,1]");
  if (learning_rate < 0.0) throw std::invalid_argument("PpoConfig: learning_rate must be >= 0");
  if (epochs < 0 || minibatch_size <= 0) throw std::invalid_argument("PpoConfig: bad epoch/minibatch");
  if (max_grad_norm <= 0.0) throw std::invalid_argument("PpoConfig: max_grad_norm must be > 0");
}

GaeResult gae_advantages(const RolloutBatch& batch, double gamma, double lambda,
                         double bootstrap_value) {
  batch.validate();
  const std::size_t n = batch.size();
  GaeResult out;
  out.advantages.assign(n, 0.0);
  out.returns.assign(n, 0.0);
  double next_adv = 0.0;
  double next_value = bootstrap_value;
  for (std::size_t k = n; k-- > 0;) {
    const double not_done = batch.terminal[k] ? 0.0 : 1.0;
    const double delta = batch.reward[k] + gamma * next_value * not_done - batch.value[k];
    const double adv = delta + gamma * lambda * not_done * next_adv;
    out.advantages[k] = adv;
    out.returns[k] = adv + batch.value[k];
    next_adv = adv;
    next_value = batch.value[k];
  }
  return out;
}

std::vector<double> normalize_advantages(const std::vector<double>& adv) {
  if (adv.empty()) return adv;
  const double n = static_cast<double>(adv.size());
  const double mean = std::accumulate(adv.begin(), adv.end(), 0.0) / n;
  double var = 0.0;
  for (double a : adv) var += (a - mean) * (a - mean);
  const double std = std::sqrt(var / n);
  std::vector<double> out(adv.size());
  const double scale = std > 1e-8 ? 1.0 / std : 1.0;
  for (std::size_t i = 0; i < adv.size(); ++i) out[i] = (adv[i] - mean) * scale;
  return out;
}

LossResult ppo_loss_and_grad(const ActorCritic& ac, const RolloutBatch& batch,
                             const std::vector<double>& advantages,
                             const std::vector<double>& returns,
                             const PpoConfig& config,
                             std::span<const std::size_t> indices) {
  if (indices.empty()) throw std::invalid_argument("ppo_loss_and_grad: empty minibatch");
  const auto b = static_cast<Eigen::Index>(indices.size());
  const double inv_b = 1.0 / static_cast<double>(b);
  const Eigen::VectorXd& log_std = ac.policy.log_std;
  const Eigen::Index d = log_std.size();

  const Eigen::MatrixXd x = gather(batch.obs, indices);
  const Eigen::MatrixXd actions = gather(batch.actions, indices);

  MlpCache policy_cache;
  MlpCache value_cache;
  const Eigen::MatrixXd mean = forward_mlp_batch(ac.policy.mean_net, x, &policy_cache);
  const Eigen::MatrixXd values = forward_mlp_batch(ac.value.net, x, &value_cache);

  const Eigen::ArrayXd inv_var = (-2.0 * log_std.array()).exp();
  const Eigen::ArrayXXd diff = (actions - mean).array();
  const Eigen::ArrayXXd scaled = diff.colwise() * inv_var;  // diff / sigma^2
  const double log_norm = log_std.sum() + 0.5 * static_cast<double>(d) * kLog2Pi;

  LossResult out;
  Eigen::RowVectorXd d_logp(b);  // d loss / d log_prob_new per sample
  double surrogate = 0.0;
  double value_loss = 0.0;
  double kl = 0.0;
  int clipped = 0;
  Eigen::MatrixXd d_value(1, b);
  for (Eigen::Index j = 0; j < b; ++j) {
    const std::size_t i = indices[j];
    const double logp = -0.5 * (diff.col(j) * scaled.col(j)).sum() - log_norm;
    const double log_ratio = logp - batch.log_prob[i];
    const double ratio = std::exp(log_ratio);
    const double adv = advantages[i];
    const double unclipped = ratio * adv;
    const double clipped_ratio = std::clamp(ratio, 1.0 - config.clip, 1.0 + config.clip);
    const double clipped_term = clipped_ratio * adv;
    if (unclipped <= clipped_term) {
      surrogate += unclipped;
      d_logp[j] = -inv_b * unclipped;
    } else {
      surrogate += clipped_term;
      d_logp[j] = 0.0;
    }
    if (std::abs(ratio - 1.0) > config.clip) ++clipped;
    kl += (ratio - 1.0) - log_ratio;

    const double err = values(0, j) - returns[i];
    value_loss += err * err;
    d_value(0, j) = 2.0 * config.value_coef * inv_b * err;
  }
  surrogate *= inv_b;
  value_loss *= inv_b;
  const double entropy = gaussian_entropy(log_std);

  out.surrogate = surrogate;
  out.value_loss = value_loss;
  out.entropy = entropy;
  out.clip_fraction = clipped * inv_b;
  out.approx_kl = kl * inv_b;
  out.loss = -surrogate + config.value_coef * value_loss - config.entropy_coef * entropy;

  if (!std::isfinite(out.loss)) {
    std::ostringstream msg;
    msg << "ppo_loss_and_grad: non-finite loss (surrogate=" << surrogate
        << ", value_loss=" << value_loss << ", entropy=" << entropy
        << ", max|log_std|=" << log_std.cwiseAbs().maxCoeff() << ")";
    throw std::runtime_error(msg.str());
  }

  // d logp / d mean = diff / sigma^2; d logp / d log_std = diff^2 / sigma^2 - 1.
  const Eigen::MatrixXd d_mean = (scaled.rowwise() * d_logp.array()).matrix();
  Eigen::VectorXd d_log_std =
      ((diff * scaled - 1.0).rowwise() * d_logp.array()).rowwise().sum().matrix();
  d_log_std.array() -= config.entropy_coef;

  MlpParams policy_grad = zeros_like(ac.policy.mean_net);
  MlpParams value_grad = zeros_like(ac.value.net);
  backward_mlp_batch(ac.policy.mean_net, policy_cache, d_mean, policy_grad);
  backward_mlp_batch(ac.value.net, value_cache, d_value, value_grad);

  out.gradient.resize(ac.parameter_count());
  Eigen::Index offset = 0;
  flatten_into(policy_grad, out.gradient, offset);
  offset += policy_grad.parameter_count();
  out.gradient.segment(offset, d) = d_log_std;
  offset += d;
  flatten_into(value_grad, out.gradient, offset);
  return out;
}

LossResult ppo_loss_and_grad(const ActorCritic& ac, const RolloutBatch& batch,
                             const std::vector<double>& advantages,
                             const std::vector<double>& returns,
                             const PpoConfig& config) {
  const auto idx = all_indices(batch.size());
  return ppo_loss_and_grad(ac, batch, advantages, returns, config, idx);
}

PpoStats ppo_update(ActorCritic& ac, const RolloutBatch& batch, const PpoConfig& config,
                    AdamState& adam, Rng& rng) {
  config.validate();
  batch.validate();
  if (batch.size() == 0) throw std::invalid_argument("ppo_update: empty batch");

  const GaeResult gae = gae_advantages(batch, config.gamma, config.lambda);
  const std::vector<double> adv = normalize_advantages(gae.advantages);

  PpoStats stats;
  stats.surrogate_before =
      ppo_loss_and_grad(ac, batch, adv, gae.returns, config).surrogate;

  Eigen::VectorXd params = flatten(ac);
  if (adam.m.size() != params.size()) {
    adam.m = Eigen::VectorXd::Zero(params.size());
    adam.v = Eigen::VectorXd::Zero(params.size());
    adam.step = 0;
  }

  std::vector<std::size_t> order = all_indices(batch.size());
  const std::size_t mb = static_cast<std::size_t>(config.minibatch_size);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    // Fisher-Yates on the portable engine output.
    for (std::size_t i = order.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng() % i);
      std::swap(order[i - 1], order[j]);
    }
    for (std::size_t start = 0; start < order.size(); start += mb) {
      const std::size_t len = std::min(mb, order.size() - start);
      const std::span<const std::size_t> idx(order.data() + start, len);
      LossResult lr = ppo_loss_and_grad(ac, batch, adv, gae.returns, config, idx);
      Eigen::VectorXd g = std::move(lr.gradient);
      const double norm = g.norm();
      if (norm > config.max_grad_norm) g *= config.max_grad_norm / norm;

      ++adam.step;
      adam.m = adam.beta1 * adam.m + (1.0 - adam.beta1) * g;
      adam.v = adam.beta2 * adam.v + (1.0 - adam.beta2) * g.cwiseAbs2();
      const double c1 = 1.0 - std::pow(adam.beta1, static_cast<double>(adam.step));
      const double c2 = 1.0 - std::pow(adam.beta2, static_cast<double>(adam.step));
      params.array() -= config.learning_rate * (adam.m.array() / c1) /
                        ((adam.v.array() / c2).sqrt() + adam.epsilon);
      unflatten(ac, params);
    }
  }

  const LossResult after = ppo_loss_and_grad(ac, batch, adv, gae.returns, config);
  stats.kl = after.approx_kl;
  stats.clip_fraction = after.clip_fraction;
  stats.loss = after.loss;
  stats.surrogate_after = after.surrogate;
  return stats;
}

}  // namespace fencing
