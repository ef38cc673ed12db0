#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fencing/snapshot_io.hpp"

namespace fencing {

using SnapshotPtr = std::shared_ptr<const PolicySnapshot>;

/// Final (antagonist, protagonist) pair of one characterization round.
struct CharacterizedPair {
  int round = 0;
  std::uint64_t seed = 0;
  std::string antagonist_id;
  std::string protagonist_id;
};

/// Versioned store of frozen policies per role plus the registry of
/// characterized pairs. Registry entries always reference stored snapshots.
class PolicyLibrary {
 public:
  /// Throws std::invalid_argument on a duplicate id or duplicate
  /// (role, phase, round, update_index).
  SnapshotPtr add(PolicySnapshot snapshot);
  void register_pair(const CharacterizedPair& pair);

  const std::vector<SnapshotPtr>& snapshots(Role role) const;
  SnapshotPtr find(const std::string& id) const;
  SnapshotPtr require(const std::string& id) const;
  const std::map<int, CharacterizedPair>& pairs() const { return pairs_; }
  std::size_t size() const { return by_id_.size(); }

  /// Writes snapshots/<id>.json for each snapshot and library.json (index
  /// plus pair registry) under `dir`.
  void save(const std::string& dir) const;
  static PolicyLibrary load(const std::string& dir);

 private:
  std::vector<SnapshotPtr> antagonists_;
  std::vector<SnapshotPtr> protagonists_;
  std::map<std::string, SnapshotPtr> by_id_;
  std::map<int, CharacterizedPair> pairs_;
};

std::string snapshot_id(Role role, int phase, int round, int update_index);

enum class OpponentSampling { kLatest, kUniformHistory };

const char* sampling_name(OpponentSampling s);
OpponentSampling parse_sampling(const std::string& name);

/// kLatest returns the snapshot with the highest update_index (the most
/// recently added on ties); kUniformHistory draws uniformly over `history`.
/// Throws std::invalid_argument on an empty history.
SnapshotPtr sample_opponent(const std::vector<SnapshotPtr>& history,
                            OpponentSampling mode, Rng& rng);

}  // namespace fencing
