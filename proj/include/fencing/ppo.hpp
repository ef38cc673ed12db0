#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fencing/gaussian_policy.hpp"

namespace fencing {

/// Per-tick training samples for one learner. Every per-tick array has the
/// same length; `terminal` marks the last tick of each game.
struct RolloutBatch {
  std::vector<Eigen::VectorXd> obs;  // network inputs
  std::vector<Eigen::VectorXd> actions;
  std::vector<double> log_prob;
  std::vector<double> reward;
  std::vector<double> value;
  std::vector<std::uint8_t> terminal;

  std::size_t size() const { return reward.size(); }
  void validate() const;
  void append(const RolloutBatch& other);
};

struct PpoConfig {
  double clip = 0.2;
  double gamma = 0.995;
  double lambda = 0.95;
  double learning_rate = 3e-4;
  int epochs = 4;
  int minibatch_size = 512;
  double entropy_coef = 0.0;
  double value_coef = 0.5;
  double max_grad_norm = 0.5;

  void validate() const;
};

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;
};

/// delta_t = r_t + gamma V_{t+1} (1 - done_t) - V_t,
/// A_t = delta_t + gamma lambda (1 - done_t) A_{t+1}; returns = A + V.
/// `bootstrap_value` stands in for V after the final sample when that sample
/// is not terminal.
GaeResult gae_advantages(const RolloutBatch& batch, double gamma, double lambda,
                         double bootstrap_value = 0.0);

/// Shifts and scales to zero mean, unit standard deviation. Degenerate
/// (constant) inputs are only centered.
std::vector<double> normalize_advantages(const std::vector<double>& adv);

struct LossResult {
  double loss = 0.0;
  double surrogate = 0.0;   // mean of min(rho A, clip(rho) A), to be maximized
  double value_loss = 0.0;  // mean squared error, before the coefficient
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;   // mean of (rho - 1) - log rho, always >= 0
  Eigen::VectorXd gradient; // flat layout of parameter_blocks()
};

/// Clipped-surrogate PPO loss over `indices` of the batch:
///   -mean(min(rho A, clip(rho, 1-eps, 1+eps) A)) + c_v MSE(V, R) - c_e H
/// with the analytic gradient over every parameter, log_std included.
/// Throws std::runtime_error if the loss is not finite.
LossResult ppo_loss_and_grad(const ActorCritic& ac, const RolloutBatch& batch,
                             const std::vector<double>& advantages,
                             const std::vector<double>& returns,
                             const PpoConfig& config,
                             std::span<const std::size_t> indices);

LossResult ppo_loss_and_grad(const ActorCritic& ac, const RolloutBatch& batch,
                             const std::vector<double>& advantages,
                             const std::vector<double>& returns,
                             const PpoConfig& config);

struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  std::int64_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct PpoStats {
  double kl = 0.0;
  double clip_fraction = 0.0;
  double loss = 0.0;
  double surrogate_before = 0.0;
  double surrogate_after = 0.0;
};

/// Runs `epochs` passes of shuffled minibatch Adam steps with global
/// gradient-norm clipping. Statistics are measured on the full batch after
/// the update against the behaviour log-probabilities in `batch`.
PpoStats ppo_update(ActorCritic& ac, const RolloutBatch& batch, const PpoConfig& config,
                    AdamState& adam, Rng& rng);

}  // namespace fencing
