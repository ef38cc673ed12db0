#include "fencing/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fencing {

int MlpParams::input_size() const {
  return layers.empty() ? 0 : static_cast<int>(layers.front().weight.cols());
}

int MlpParams::output_size() const {
  return layers.empty() ? 0 : static_cast<int>(layers.back().weight.rows());
}

Eigen::Index MlpParams::parameter_count() const {
  Eigen::Index n = 0;
  for (const auto& l : layers) n += l.weight.size() + l.bias.size();
  return n;
}

void MlpParams::validate() const {
  if (layers.empty()) throw std::invalid_argument("MlpParams: no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    if (l.bias.size() != l.weight.rows()) {
      throw std::invalid_argument("MlpParams: bias size mismatch in layer " +
                                  std::to_string(i));
    }
    if (i > 0 && l.weight.cols() != layers[i - 1].weight.rows()) {
      throw std::invalid_argument("MlpParams: layer " + std::to_string(i) +
                                  " does not chain with its predecessor");
    }
    if (!l.weight.allFinite() || !l.bias.allFinite()) {
      throw std::invalid_argument("MlpParams: non-finite entry in layer " +
                                  std::to_string(i));
    }
  }
}

MlpParams make_mlp(const std::vector<int>& sizes, Rng& rng, double gain,
                   double output_gain) {
  if (sizes.size() < 2) throw std::invalid_argument("make_mlp: need >= 2 sizes");
  MlpParams params;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    const int in = sizes[i];
    const int out = sizes[i + 1];
    const bool last = i + 2 == sizes.size();
    const double scale = (last ? output_gain : gain) / std::sqrt(static_cast<double>(in));
    DenseLayer layer;
    layer.weight.resize(out, in);
    for (int r = 0; r < out; ++r) {
      for (int c = 0; c < in; ++c) layer.weight(r, c) = scale * standard_normal(rng);
    }
    layer.bias = Eigen::VectorXd::Zero(out);
    params.layers.push_back(std::move(layer));
  }
  return params;
}

Eigen::VectorXd forward_mlp(const MlpParams& params, const Eigen::VectorXd& x) {
  if (params.layers.empty()) throw std::invalid_argument("forward_mlp: empty network");
  if (x.size() != params.input_size()) {
    throw std::invalid_argument("forward_mlp: input size " + std::to_string(x.size()) +
                                " != " + std::to_string(params.input_size()));
  }
  Eigen::VectorXd h = x;
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    const auto& l = params.layers[i];
    Eigen::VectorXd z = l.weight * h + l.bias;
    h = i + 1 < params.layers.size() ? Eigen::VectorXd(z.array().tanh()) : z;
  }
  return h;
}

Eigen::MatrixXd forward_mlp_batch(const MlpParams& params,
                                  const Eigen::MatrixXd& x, MlpCache* cache) {
  if (x.rows() != params.input_size()) {
    throw std::invalid_argument("forward_mlp_batch: input size mismatch");
  }
  if (cache) {
    cache->activations.clear();
    cache->activations.push_back(x);
  }
  Eigen::MatrixXd h = x;
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    const auto& l = params.layers[i];
    Eigen::MatrixXd z = l.weight * h;
    z.colwise() += l.bias;
    if (i + 1 < params.layers.size()) z = z.array().tanh().matrix();
    h = std::move(z);
    if (cache) cache->activations.push_back(h);
  }
  return h;
}

void backward_mlp_batch(const MlpParams& params, const MlpCache& cache,
                        const Eigen::MatrixXd& d_out, MlpParams& grad) {
  Eigen::MatrixXd delta = d_out;
  for (std::size_t k = params.layers.size(); k-- > 0;) {
    const Eigen::MatrixXd& input = cache.activations[k];
    grad.layers[k].weight.noalias() += delta * input.transpose();
    grad.layers[k].bias += delta.rowwise().sum();
    if (k == 0) break;
    Eigen::MatrixXd back = params.layers[k].weight.transpose() * delta;
    // input is tanh(z) for hidden layers: d tanh = 1 - tanh^2.
    delta = back.array() * (1.0 - input.array().square());
  }
}

MlpParams zeros_like(const MlpParams& params) {
  MlpParams out = params;
  for (auto& l : out.layers) {
    l.weight.setZero();
    l.bias.setZero();
  }
  return out;
}

void flatten_into(const MlpParams& params, Eigen::VectorXd& out, Eigen::Index offset) {
  for (const auto& l : params.layers) {
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) out[offset++] = l.weight(r, c);
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) out[offset++] = l.bias[r];
  }
}

void unflatten_from(MlpParams& params, const Eigen::VectorXd& in, Eigen::Index offset) {
  for (auto& l : params.layers) {
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) l.weight(r, c) = in[offset++];
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) l.bias[r] = in[offset++];
  }
}

}  // namespace fencing
