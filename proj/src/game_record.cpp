#include "fencing/game_record.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fencing {

GameRecord make_record(TrajectoryLog log, std::string antagonist_id,
                       std::string protagonist_id, bool truncated) {
  GameRecord r;
  r.final_score = log.final_score();
  r.log = std::move(log);
  r.antagonist_id = std::move(antagonist_id);
  r.protagonist_id = std::move(protagonist_id);
  r.truncated = truncated;
  return r;
}

void write_record(std::ostream& out, const GameRecord& r) {
  const Json header{{"schema_version", kGameRecordSchemaVersion},
                    {"kind", "fencing_game_record"},
                    {"seed", r.log.seed},
                    {"config", r.log.config},
                    {"antagonist_id", r.antagonist_id},
                    {"protagonist_id", r.protagonist_id},
                    {"meta", r.log.meta}};
  out << header.dump() << '\n';
  for (const auto& t : r.log.ticks) out << trajectory_tick_json(t).dump() << '\n';
  out << Json{{"footer", true}, {"final_score", r.final_score}, {"truncated", r.truncated}}.dump()
      << '\n';
}

std::string record_to_string(const GameRecord& record) {
  std::ostringstream ss;
  write_record(ss, record);
  return ss.str();
}

GameRecord read_record(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("game record: empty input");
  const Json header = Json::parse(line);
  const int version = header.at("schema_version").get<int>();
  if (version != kGameRecordSchemaVersion) {
    throw std::runtime_error("game record: schema version mismatch (expected " +
                             std::to_string(kGameRecordSchemaVersion) + ", found " +
                             std::to_string(version) + ")");
  }
  GameRecord r;
  header.at("config").get_to(r.log.config);
  r.log.seed = header.at("seed").get<std::uint64_t>();
  r.antagonist_id = header.at("antagonist_id").get<std::string>();
  r.protagonist_id = header.at("protagonist_id").get<std::string>();
  if (header.contains("meta")) r.log.meta = header.at("meta");
  bool footer = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (footer) throw std::runtime_error("game record: data after footer");
    const Json j = Json::parse(line);
    if (j.contains("footer")) {
      r.final_score = j.at("final_score").get<int>();
      r.truncated = j.at("truncated").get<bool>();
      footer = true;
    } else {
      r.log.ticks.push_back(trajectory_tick_from_json(j));
    }
  }
  if (!footer) throw std::runtime_error("game record: missing footer");
  return r;
}

GameRecord record_from_string(const std::string& text) {
  std::istringstream ss(text);
  return read_record(ss);
}

void save_record(const std::string& path, const GameRecord& record) {
  write_text_file(path, record_to_string(record));
}

GameRecord load_record(const std::string& path) { return record_from_string(read_text_file(path)); }

RecordCheck validate_record(const GameRecord& r) {
  auto fail = [](std::string why) { return RecordCheck{false, std::move(why)}; };
  const auto& ticks = r.log.ticks;
  if (ticks.empty()) return fail("no ticks");
  const std::vector<int> deltas = rescore_trajectory(r.log);
  int running = 0;
  for (std::size_t i = 0; i < ticks.size(); ++i) {
    const auto& t = ticks[i];
    if (t.tick != static_cast<int>(i)) return fail("tick " + std::to_string(i) + " out of sequence");
    if (t.delta != deltas[i]) {
      return fail("tick " + std::to_string(i) + ": logged delta " + std::to_string(t.delta) +
                  ", recomputed " + std::to_string(deltas[i]));
    }
    int event_sum = 0;
    for (const auto& e : t.events) event_sum += score_value(e.kind, r.log.config);
    if (event_sum != t.delta) return fail("tick " + std::to_string(i) + ": events disagree with delta");
    running += deltas[i];
    if (t.score != running) return fail("tick " + std::to_string(i) + ": running score mismatch");
  }
  if (r.final_score != running) {
    return fail("final score " + std::to_string(r.final_score) + " but log sums to " +
                std::to_string(running));
  }
  const int last = ticks.back().tick;
  if (!r.truncated && last != r.log.config.horizon_ticks) return fail("complete game ends early");
  if (last > r.log.config.horizon_ticks) return fail("ticks beyond horizon");
  return {};
}

}  // namespace fencing
