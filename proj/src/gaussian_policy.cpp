#include "fencing/gaussian_policy.hpp"

#include <cmath>
#include <stdexcept>

namespace fencing {
namespace {
const double kLog2Pi = std::log(2.0 * M_PI);
}

Eigen::Index ActorCritic::parameter_count() const {
  return policy.mean_net.parameter_count() + policy.log_std.size() +
         value.net.parameter_count();
}

void ActorCritic::validate() const {
  policy.mean_net.validate();
  value.net.validate();
  if (policy.log_std.size() != policy.mean_net.output_size()) {
    throw std::invalid_argument("ActorCritic: log_std size does not match action size");
  }
  if (!policy.log_std.allFinite()) {
    throw std::invalid_argument("ActorCritic: non-finite log_std");
  }
  if (value.net.output_size() != 1) {
    throw std::invalid_argument("ActorCritic: value network must output a scalar");
  }
  if (value.net.input_size() != policy.mean_net.input_size()) {
    throw std::invalid_argument("ActorCritic: policy and value input sizes differ");
  }
}

ActorCritic make_actor_critic(const NetworkShape& shape, Rng& rng) {
  std::vector<int> policy_sizes{shape.obs_size};
  policy_sizes.insert(policy_sizes.end(), shape.hidden.begin(), shape.hidden.end());
  policy_sizes.push_back(shape.action_size);
  std::vector<int> value_sizes{shape.obs_size};
  value_sizes.insert(value_sizes.end(), shape.hidden.begin(), shape.hidden.end());
  value_sizes.push_back(1);

  ActorCritic ac;
  ac.policy.mean_net = make_mlp(policy_sizes, rng, 1.0, 0.01);
  ac.policy.log_std = Eigen::VectorXd::Constant(shape.action_size, shape.initial_log_std);
  ac.value.net = make_mlp(value_sizes, rng, 1.0, 1.0);
  return ac;
}

std::vector<ParameterBlock> parameter_blocks(const ActorCritic& ac) {
  std::vector<ParameterBlock> blocks;
  Eigen::Index offset = 0;
  auto add_net = [&](const std::string& prefix, const MlpParams& net) {
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
      const auto& l = net.layers[i];
      blocks.push_back({prefix + ".w" + std::to_string(i), offset, l.weight.size()});
      offset += l.weight.size();
      blocks.push_back({prefix + ".b" + std::to_string(i), offset, l.bias.size()});
      offset += l.bias.size();
    }
  };
  add_net("policy", ac.policy.mean_net);
  blocks.push_back({"log_std", offset, ac.policy.log_std.size()});
  offset += ac.policy.log_std.size();
  add_net("value", ac.value.net);
  return blocks;
}

Eigen::VectorXd flatten(const ActorCritic& ac) {
  Eigen::VectorXd flat(ac.parameter_count());
  Eigen::Index offset = 0;
  flatten_into(ac.policy.mean_net, flat, offset);
  offset += ac.policy.mean_net.parameter_count();
  flat.segment(offset, ac.policy.log_std.size()) = ac.policy.log_std;
  offset += ac.policy.log_std.size();
  flatten_into(ac.value.net, flat, offset);
  return flat;
}

void unflatten(ActorCritic& ac, const Eigen::VectorXd& flat) {
  if (flat.size() != ac.parameter_count()) {
    throw std::invalid_argument("unflatten: parameter count mismatch");
  }
  Eigen::Index offset = 0;
  unflatten_from(ac.policy.mean_net, flat, offset);
  offset += ac.policy.mean_net.parameter_count();
  ac.policy.log_std = flat.segment(offset, ac.policy.log_std.size());
  offset += ac.policy.log_std.size();
  unflatten_from(ac.value.net, flat, offset);
}

double gaussian_log_prob(const Eigen::VectorXd& mean, const Eigen::VectorXd& log_std,
                         const Eigen::VectorXd& action) {
  const Eigen::ArrayXd z = (action - mean).array() * (-log_std.array()).exp();
  return -0.5 * z.square().sum() - log_std.sum() -
         0.5 * static_cast<double>(mean.size()) * kLog2Pi;
}

double gaussian_entropy(const Eigen::VectorXd& log_std) {
  return log_std.sum() + 0.5 * static_cast<double>(log_std.size()) * (1.0 + kLog2Pi);
}

SampledAction sample_action(const GaussianPolicy& policy, const Eigen::VectorXd& obs,
                            Rng& rng, bool deterministic) {
  SampledAction out;
  const Eigen::VectorXd mean = forward_mlp(policy.mean_net, obs);
  if (deterministic) {
    out.action = mean;
  } else {
    out.action.resize(mean.size());
    for (Eigen::Index i = 0; i < mean.size(); ++i) {
      out.action[i] = mean[i] + std::exp(policy.log_std[i]) * standard_normal(rng);
    }
  }
  out.log_prob = gaussian_log_prob(mean, policy.log_std, out.action);
  return out;
}

double value_of(const ValueParams& value, const Eigen::VectorXd& obs) {
  return forward_mlp(value.net, obs)[0];
}

Eigen::VectorXd network_input(const Observation& obs, const GameConfig& config) {
  Eigen::VectorXd x(kObservationSize);
  for (int block = 0; block < 2; ++block) {
    const int o = block * kBatFeatureSize;
    x.segment<3>(o) = (obs.segment<3>(o) - config.target_center) / config.reach_radius;
    x.segment<3>(o + 3) = obs.segment<3>(o + 3);
    x.segment<3>(o + 6) = obs.segment<3>(o + 6) / config.v_max;
    x.segment<3>(o + 9) = obs.segment<3>(o + 9) / config.omega_max;
  }
  x[2 * kBatFeatureSize] = obs[2 * kBatFeatureSize] / config.horizon_seconds();
  return x;
}

AgentAction action_from_output(const Eigen::VectorXd& out, const GameConfig& config) {
  if (out.size() != kActionSize) {
    throw std::invalid_argument("action_from_output: expected 6 components");
  }
  AgentAction a;
  a.d_pos = out.segment<3>(0) * config.d_pos_max;
  a.d_dir = out.segment<3>(3) * config.d_dir_max;
  return a;
}

}  // namespace fencing
