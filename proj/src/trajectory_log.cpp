#include "fencing/trajectory_log.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fencing {

TrajectoryTick make_tick(const GameState& state, int delta,
                         std::vector<ScoreEvent> events) {
  TrajectoryTick t;
  t.tick = state.tick;
  t.bat_a = state.bat_a;
  t.bat_p = state.bat_p;
  t.delta = delta;
  t.events = std::move(events);
  t.score = state.score;
  return t;
}

Json trajectory_header_json(const TrajectoryLog& log) {
  return Json{{"schema_version", kTrajectorySchemaVersion},
              {"kind", "fencing_trajectory"},
              {"seed", log.seed},
              {"config", log.config},
              {"meta", log.meta}};
}

Json trajectory_tick_json(const TrajectoryTick& t) {
  return Json{{"tick", t.tick},   {"bat_a", t.bat_a},   {"bat_p", t.bat_p},
              {"delta", t.delta}, {"events", t.events}, {"score", t.score}};
}

TrajectoryTick trajectory_tick_from_json(const Json& j) {
  TrajectoryTick t;
  t.tick = j.at("tick").get<int>();
  j.at("bat_a").get_to(t.bat_a);
  j.at("bat_p").get_to(t.bat_p);
  t.delta = j.at("delta").get<int>();
  j.at("events").get_to(t.events);
  t.score = j.at("score").get<int>();
  return t;
}

void write_trajectory(std::ostream& out, const TrajectoryLog& log) {
  out << trajectory_header_json(log).dump() << '\n';
  for (const auto& t : log.ticks) out << trajectory_tick_json(t).dump() << '\n';
}

std::string trajectory_to_string(const TrajectoryLog& log) {
  std::ostringstream ss;
  write_trajectory(ss, log);
  return ss.str();
}

TrajectoryLog read_trajectory(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trajectory: empty input");
  const Json header = Json::parse(line);
  const int version = header.at("schema_version").get<int>();
  if (version != kTrajectorySchemaVersion) {
    throw std::runtime_error("trajectory: schema version mismatch (expected " +
                             std::to_string(kTrajectorySchemaVersion) +
                             ", found " + std::to_string(version) + ")");
  }
  TrajectoryLog log;
  header.at("config").get_to(log.config);
  log.seed = header.at("seed").get<std::uint64_t>();
  if (header.contains("meta")) log.meta = header.at("meta");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    log.ticks.push_back(trajectory_tick_from_json(Json::parse(line)));
  }
  return log;
}

TrajectoryLog trajectory_from_string(const std::string& text) {
  std::istringstream ss(text);
  return read_trajectory(ss);
}

std::vector<int> rescore_trajectory(const TrajectoryLog& log) {
  std::vector<int> deltas;
  deltas.reserve(log.ticks.size());
  int camping = 0;
  for (const auto& t : log.ticks) {
    if (t.tick == 0) {
      deltas.push_back(0);
      continue;
    }
    GameState s;
    s.tick = t.tick;
    s.bat_a = t.bat_a;
    s.bat_p = t.bat_p;
    s.camping_counter = camping;
    const TickScore ts = score_tick(s, log.config);
    camping = ts.camping_counter;
    deltas.push_back(ts.delta);
  }
  return deltas;
}

}  // namespace fencing
