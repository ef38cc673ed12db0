#pragma once

#include <string>

#include "fencing/gaussian_policy.hpp"
#include "fencing/json_io.hpp"

namespace fencing {

inline constexpr int kSnapshotSchemaVersion = 1;

/// A frozen policy with its lineage. (role, phase, round, update_index) is
/// unique within a library.
struct PolicySnapshot {
  std::string id;
  Role role = Role::kAntagonist;
  int phase = 1;
  int round = 0;
  int update_index = 0;
  std::string parent_id;  // snapshot this lineage was initialised from
  ActorCritic params;
};

Json mlp_to_json(const MlpParams& params);
MlpParams mlp_from_json(const Json& j);

Json snapshot_to_json(const PolicySnapshot& snapshot);
/// Validates schema version and every layer shape against the stored shapes.
PolicySnapshot snapshot_from_json(const Json& j);

void save_snapshot(const std::string& path, const PolicySnapshot& snapshot);
PolicySnapshot load_snapshot(const std::string& path);

}  // namespace fencing
