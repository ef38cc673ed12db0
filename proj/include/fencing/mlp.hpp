#pragma once

#include <vector>

#include <Eigen/Core>

#include "fencing/common.hpp"

namespace fencing {

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
};

/// Fully connected network: tanh on every hidden layer, linear output.
struct MlpParams {
  std::vector<DenseLayer> layers;

  int input_size() const;
  int output_size() const;
  Eigen::Index parameter_count() const;
  /// Throws std::invalid_argument if layer shapes do not chain or any entry is
  /// non-finite.
  void validate() const;
};

/// `sizes` = {in, hidden..., out}. Weights ~ N(0, gain^2 / fan_in); the last
/// layer uses `output_gain` instead. Biases start at zero.
MlpParams make_mlp(const std::vector<int>& sizes, Rng& rng, double gain = 1.0,
                   double output_gain = 0.01);

Eigen::VectorXd forward_mlp(const MlpParams& params, const Eigen::VectorXd& x);

/// Activations kept for backpropagation; activations[0] is the input batch.
struct MlpCache {
  std::vector<Eigen::MatrixXd> activations;
};

/// Column-major batch forward: `x` is in x batch, result out x batch.
Eigen::MatrixXd forward_mlp_batch(const MlpParams& params,
                                  const Eigen::MatrixXd& x, MlpCache* cache);

/// Gradient of sum(d_out .* output) with respect to every parameter,
/// accumulated into `grad` (same layout as the parameters).
void backward_mlp_batch(const MlpParams& params, const MlpCache& cache,
                        const Eigen::MatrixXd& d_out, MlpParams& grad);

MlpParams zeros_like(const MlpParams& params);

/// Flat layout: for each layer, weight (row-major) then bias.
void flatten_into(const MlpParams& params, Eigen::VectorXd& out, Eigen::Index offset);
void unflatten_from(MlpParams& params, const Eigen::VectorXd& in, Eigen::Index offset);

}  // namespace fencing
