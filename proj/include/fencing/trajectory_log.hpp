#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fencing/game.hpp"
#include "fencing/json_io.hpp"

namespace fencing {

inline constexpr int kTrajectorySchemaVersion = 1;

/// One line of the trajectory log. Tick 0 is the post-reset state with no
/// scoring applied.
struct TrajectoryTick {
  int tick = 0;
  BatState bat_a;
  BatState bat_p;
  int delta = 0;
  std::vector<ScoreEvent> events;
  int score = 0;
  friend bool operator==(const TrajectoryTick&, const TrajectoryTick&) = default;
};

struct TrajectoryLog {
  GameConfig config;
  std::uint64_t seed = 0;
  Json meta = Json::object();  // free-form, carried through verbatim
  std::vector<TrajectoryTick> ticks;

  int final_score() const { return ticks.empty() ? 0 : ticks.back().score; }
  friend bool operator==(const TrajectoryLog&, const TrajectoryLog&) = default;
};

TrajectoryTick make_tick(const GameState& state, int delta,
                         std::vector<ScoreEvent> events);

Json trajectory_header_json(const TrajectoryLog& log);
Json trajectory_tick_json(const TrajectoryTick& tick);
TrajectoryTick trajectory_tick_from_json(const Json& j);

/// Line-delimited JSON: a header line then one record per tick.
void write_trajectory(std::ostream& out, const TrajectoryLog& log);
std::string trajectory_to_string(const TrajectoryLog& log);
/// Throws std::runtime_error on schema-version mismatch or malformed lines.
TrajectoryLog read_trajectory(std::istream& in);
TrajectoryLog trajectory_from_string(const std::string& text);

/// Replays the scoring rules over the logged geometry only (no dynamics) and
/// returns the per-tick deltas.
std::vector<int> rescore_trajectory(const TrajectoryLog& log);

}  // namespace fencing
