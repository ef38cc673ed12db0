#include "fencing/snapshot_io.hpp"

#include <stdexcept>

namespace fencing {

Json mlp_to_json(const MlpParams& params) {
  Json layers = Json::array();
  for (const auto& l : params.layers) {
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(l.weight.size()));
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) w.push_back(l.weight(r, c));
    }
    std::vector<double> b(l.bias.data(), l.bias.data() + l.bias.size());
    layers.push_back({{"shape", {l.weight.rows(), l.weight.cols()}},
                      {"weight", w},
                      {"bias", b}});
  }
  return Json{{"hidden_activation", "tanh"}, {"output_activation", "linear"},
              {"layers", layers}};
}

MlpParams mlp_from_json(const Json& j) {
  MlpParams params;
  for (const auto& lj : j.at("layers")) {
    const auto shape = lj.at("shape").get<std::vector<Eigen::Index>>();
    if (shape.size() != 2 || shape[0] <= 0 || shape[1] <= 0) {
      throw std::runtime_error("snapshot: bad layer shape " + lj.at("shape").dump());
    }
    const auto w = lj.at("weight").get<std::vector<double>>();
    const auto b = lj.at("bias").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(w.size()) != shape[0] * shape[1] ||
        static_cast<Eigen::Index>(b.size()) != shape[0]) {
      throw std::runtime_error("snapshot: weight/bias length does not match shape");
    }
    DenseLayer layer;
    layer.weight.resize(shape[0], shape[1]);
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < shape[0]; ++r) {
      for (Eigen::Index c = 0; c < shape[1]; ++c) layer.weight(r, c) = w[k++];
    }
    layer.bias = Eigen::Map<const Eigen::VectorXd>(b.data(), shape[0]);
    params.layers.push_back(std::move(layer));
  }
  params.validate();
  return params;
}

Json snapshot_to_json(const PolicySnapshot& s) {
  const Eigen::VectorXd& ls = s.params.policy.log_std;
  return Json{{"schema_version", kSnapshotSchemaVersion},
              {"id", s.id},
              {"role", role_name(s.role)},
              {"phase", s.phase},
              {"round", s.round},
              {"update_index", s.update_index},
              {"parent_id", s.parent_id},
              {"policy", mlp_to_json(s.params.policy.mean_net)},
              {"log_std", std::vector<double>(ls.data(), ls.data() + ls.size())},
              {"value", mlp_to_json(s.params.value.net)}};
}

PolicySnapshot snapshot_from_json(const Json& j) {
  const int version = j.at("schema_version").get<int>();
  if (version != kSnapshotSchemaVersion) {
    throw std::runtime_error("snapshot: schema version mismatch (expected " +
                             std::to_string(kSnapshotSchemaVersion) + ", found " +
                             std::to_string(version) + ")");
  }
  PolicySnapshot s;
  s.id = j.at("id").get<std::string>();
  s.role = parse_role(j.at("role").get<std::string>());
  s.phase = j.at("phase").get<int>();
  s.round = j.at("round").get<int>();
  s.update_index = j.at("update_index").get<int>();
  s.parent_id = j.value("parent_id", std::string());
  s.params.policy.mean_net = mlp_from_json(j.at("policy"));
  const auto ls = j.at("log_std").get<std::vector<double>>();
  s.params.policy.log_std = Eigen::Map<const Eigen::VectorXd>(
      ls.data(), static_cast<Eigen::Index>(ls.size()));
  s.params.value.net = mlp_from_json(j.at("value"));
  try {
    s.params.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("snapshot: ") + e.what());
  }
  if (s.params.policy.mean_net.input_size() != kObservationSize ||
      s.params.policy.mean_net.output_size() != kActionSize) {
    throw std::runtime_error("snapshot: policy must map 25 observations to 6 actions");
  }
  return s;
}

void save_snapshot(const std::string& path, const PolicySnapshot& snapshot) {
  write_text_file(path, snapshot_to_json(snapshot).dump(1) + "\n");
}

PolicySnapshot load_snapshot(const std::string& path) {
  return snapshot_from_json(Json::parse(read_text_file(path)));
}

}  // namespace fencing
