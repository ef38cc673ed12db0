#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fencing/game.hpp"
#include "fencing/mlp.hpp"

namespace fencing {

inline constexpr int kActionSize = 6;

/// Diagonal Gaussian policy with a state-independent log standard deviation.
struct GaussianPolicy {
  MlpParams mean_net;
  Eigen::VectorXd log_std;
};

struct ValueParams {
  MlpParams net;
};

/// Policy plus value network for one agent role.
struct ActorCritic {
  GaussianPolicy policy;
  ValueParams value;

  Eigen::Index parameter_count() const;
  void validate() const;
};

struct NetworkShape {
  int obs_size = kObservationSize;
  int action_size = kActionSize;
  std::vector<int> hidden{64, 64};
  double initial_log_std = -0.7;
};

ActorCritic make_actor_critic(const NetworkShape& shape, Rng& rng);

/// Named contiguous block of the flat parameter vector.
struct ParameterBlock {
  std::string name;
  Eigen::Index offset = 0;
  Eigen::Index size = 0;
};

/// Flat layout: mean_net, log_std, value net.
std::vector<ParameterBlock> parameter_blocks(const ActorCritic& ac);
Eigen::VectorXd flatten(const ActorCritic& ac);
void unflatten(ActorCritic& ac, const Eigen::VectorXd& flat);

double gaussian_log_prob(const Eigen::VectorXd& mean, const Eigen::VectorXd& log_std,
                         const Eigen::VectorXd& action);
double gaussian_entropy(const Eigen::VectorXd& log_std);

struct SampledAction {
  Eigen::VectorXd action;
  double log_prob = 0.0;
};

/// action = mean + exp(log_std) .* eps with eps ~ N(0, I); the deterministic
/// mode returns the mean and its log-density.
SampledAction sample_action(const GaussianPolicy& policy, const Eigen::VectorXd& obs,
                            Rng& rng, bool deterministic = false);

double value_of(const ValueParams& value, const Eigen::VectorXd& obs);

/// Fixed affine rescaling of an observation into roughly unit range: positions
/// relative to the target over the reach radius, rates over their limits, time
/// over the horizon. The networks always consume this form.
Eigen::VectorXd network_input(const Observation& obs, const GameConfig& config);

/// Maps a raw network action onto the pose-offset interface: the first three
/// components scale d_pos_max, the last three d_dir_max.
AgentAction action_from_output(const Eigen::VectorXd& out, const GameConfig& config);

}  // namespace fencing
