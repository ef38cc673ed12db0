#pragma once

#include <iosfwd>
#include <string>

#include "fencing/trajectory_log.hpp"

namespace fencing {

inline constexpr int kGameRecordSchemaVersion = 1;

/// A finished (or aborted) game as persisted by the harness: header with the
/// policy ids, the full trajectory, and a footer with the final score.
struct GameRecord {
  TrajectoryLog log;  // carries config, seed and free-form meta
  std::string antagonist_id;
  std::string protagonist_id;
  int final_score = 0;
  bool truncated = false;  // client disconnected before the horizon

  friend bool operator==(const GameRecord&, const GameRecord&) = default;
};

GameRecord make_record(TrajectoryLog log, std::string antagonist_id,
                       std::string protagonist_id, bool truncated = false);

void write_record(std::ostream& out, const GameRecord& record);
std::string record_to_string(const GameRecord& record);
/// Throws std::runtime_error naming expected and found versions on a schema
/// mismatch, or on a missing footer.
GameRecord read_record(std::istream& in);
GameRecord record_from_string(const std::string& text);

void save_record(const std::string& path, const GameRecord& record);
GameRecord load_record(const std::string& path);

struct RecordCheck {
  bool ok = true;
  std::string problem;  // first inconsistency found
};

/// Re-derives every per-tick delta from the logged geometry and checks the
/// running score, the stored final score and the tick sequence.
RecordCheck validate_record(const GameRecord& record);

}  // namespace fencing
