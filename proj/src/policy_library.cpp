#include "fencing/policy_library.hpp"

#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <tuple>

namespace fencing {

SnapshotPtr PolicyLibrary::add(PolicySnapshot snapshot) {
  if (by_id_.count(snapshot.id)) {
    throw std::invalid_argument("PolicyLibrary: duplicate snapshot id " + snapshot.id);
  }
  auto& list = snapshot.role == Role::kAntagonist ? antagonists_ : protagonists_;
  for (const auto& s : list) {
    if (std::tie(s->phase, s->round, s->update_index) ==
        std::tie(snapshot.phase, snapshot.round, snapshot.update_index)) {
      throw std::invalid_argument("PolicyLibrary: duplicate lineage key for " + snapshot.id);
    }
  }
  auto ptr = std::make_shared<const PolicySnapshot>(std::move(snapshot));
  list.push_back(ptr);
  by_id_[ptr->id] = ptr;
  return ptr;
}

void PolicyLibrary::register_pair(const CharacterizedPair& pair) {
  const auto a = require(pair.antagonist_id);
  const auto p = require(pair.protagonist_id);
  if (a->role != Role::kAntagonist || p->role != Role::kProtagonist) {
    throw std::invalid_argument("PolicyLibrary: pair roles are swapped");
  }
  pairs_[pair.round] = pair;
}

const std::vector<SnapshotPtr>& PolicyLibrary::snapshots(Role role) const {
  return role == Role::kAntagonist ? antagonists_ : protagonists_;
}

SnapshotPtr PolicyLibrary::find(const std::string& id) const {
  const auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : it->second;
}

SnapshotPtr PolicyLibrary::require(const std::string& id) const {
  auto s = find(id);
  if (!s) throw std::invalid_argument("PolicyLibrary: unknown snapshot " + id);
  return s;
}

void PolicyLibrary::save(const std::string& dir) const {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "snapshots");
  Json index = Json::object();
  Json ids = Json::array();
  for (Role role : {Role::kAntagonist, Role::kProtagonist}) {
    for (const auto& s : snapshots(role)) {
      ids.push_back(s->id);
      save_snapshot((fs::path(dir) / "snapshots" / (s->id + ".json")).string(), *s);
    }
  }
  Json pairs = Json::array();
  for (const auto& [round, p] : pairs_) {
    pairs.push_back({{"round", round},
                     {"seed", p.seed},
                     {"antagonist", p.antagonist_id},
                     {"protagonist", p.protagonist_id}});
  }
  index["schema_version"] = kSnapshotSchemaVersion;
  index["snapshots"] = ids;
  index["pairs"] = pairs;
  write_text_file((fs::path(dir) / "library.json").string(), index.dump(1) + "\n");
}

PolicyLibrary PolicyLibrary::load(const std::string& dir) {
  namespace fs = std::filesystem;
  const Json index = Json::parse(read_text_file((fs::path(dir) / "library.json").string()));
  PolicyLibrary lib;
  for (const auto& id : index.at("snapshots")) {
    lib.add(load_snapshot(
        (fs::path(dir) / "snapshots" / (id.get<std::string>() + ".json")).string()));
  }
  for (const auto& p : index.at("pairs")) {
    lib.register_pair({p.at("round").get<int>(), p.at("seed").get<std::uint64_t>(),
                       p.at("antagonist").get<std::string>(),
                       p.at("protagonist").get<std::string>()});
  }
  return lib;
}

std::string snapshot_id(Role role, int phase, int round, int update_index) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s-p%d-r%d-u%05d",
                role == Role::kAntagonist ? "mu" : "nu", phase, round, update_index);
  return buf;
}

const char* sampling_name(OpponentSampling s) {
  return s == OpponentSampling::kLatest ? "latest" : "uniform_history";
}

OpponentSampling parse_sampling(const std::string& name) {
  if (name == "latest") return OpponentSampling::kLatest;
  if (name == "uniform_history") return OpponentSampling::kUniformHistory;
  throw std::invalid_argument("unknown opponent sampling: " + name);
}

SnapshotPtr sample_opponent(const std::vector<SnapshotPtr>& history,
                            OpponentSampling mode, Rng& rng) {
  if (history.empty()) throw std::invalid_argument("sample_opponent: empty history");
  if (mode == OpponentSampling::kLatest) {
    SnapshotPtr best = history.front();
    for (const auto& s : history) {
      if (s->update_index >= best->update_index) best = s;
    }
    return best;
  }
  const auto n = history.size();
  auto k = static_cast<std::size_t>(uniform(rng, 0.0, static_cast<double>(n)));
  if (k >= n) k = n - 1;
  return history[k];
}

}  // namespace fencing
