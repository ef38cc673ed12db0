#include "fencing/live_session.hpp"

#include <cmath>
#include <cstdio>

#include "fencing/geometry.hpp"

namespace fencing {
namespace {

Vec3 finite_vec3(const Json& j, const char* key) {
  if (!j.contains(key)) throw ProtocolError(std::string("missing field '") + key + "'");
  const Json& v = j.at(key);
  if (!v.is_array() || v.size() != 3) throw ProtocolError(std::string("'") + key + "' must be [x,y,z]");
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    if (!v[static_cast<std::size_t>(i)].is_number()) {
      throw ProtocolError(std::string("'") + key + "' must hold numbers");
    }
    out[i] = v[static_cast<std::size_t>(i)].get<double>();
    if (!std::isfinite(out[i])) throw ProtocolError(std::string("'") + key + "' is not finite");
  }
  return out;
}

}  // namespace

const char* cue_name(Cue cue) {
  switch (cue) {
    case Cue::kHigh: return "high";
    case Cue::kLow: return "low";
    case Cue::kNone: return "none";
  }
  return "none";
}

Cue cue_for(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::kScoreTick: return Cue::kHigh;
    case ScoreKind::kContactPenalty: return Cue::kLow;
    case ScoreKind::kCampingReward: return Cue::kNone;
  }
  return Cue::kNone;
}

ClientMessage parse_client_message(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception&) {
    throw ProtocolError("not valid JSON");
  }
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw ProtocolError("message needs a string 'type'");
  }
  const std::string type = j.at("type").get<std::string>();
  ClientMessage m;
  if (type == "join") {
    m.type = ClientMessage::Type::kJoin;
    if (j.contains("name")) {
      if (!j.at("name").is_string()) throw ProtocolError("'name' must be a string");
      m.name = j.at("name").get<std::string>();
    }
  } else if (type == "cmd") {
    m.type = ClientMessage::Type::kCmd;
    m.pose.center = finite_vec3(j, "pos");
    const Vec3 dir = finite_vec3(j, "dir");
    if (dir.norm() < 1e-9) throw ProtocolError("'dir' must be non-zero");
    m.pose.dir = dir.normalized();
  } else if (type == "restart") {
    m.type = ClientMessage::Type::kRestart;
  } else {
    throw ProtocolError("unknown message type '" + type + "'");
  }
  return m;
}

Json hello_message(const GameConfig& config, const std::string& protagonist_id) {
  return Json{{"type", "hello"}, {"config", config}, {"role", "antagonist"}, {"opponent", protagonist_id}};
}

Json state_message(const GameState& s, const std::vector<ScoreEvent>& events, const GameConfig& config) {
  Json ev = Json::array();
  for (const auto& e : events) {
    ev.push_back({{"kind", score_kind_name(e.kind)}, {"cue", cue_name(cue_for(e.kind))}});
  }
  return Json{{"type", "state"}, {"tick", s.tick}, {"t", s.tick * config.dt},
              {"bat_a", s.bat_a},  {"bat_p", s.bat_p}, {"score", s.score},
              {"events", ev}};
}

Json game_over_message(int score) { return Json{{"type", "game_over"}, {"score", score}}; }

Json error_message(const std::string& message) { return Json{{"type", "error"}, {"message", message}}; }

LiveSession::LiveSession(Options options) : opt_(std::move(options)) {
  opt_.config.validate();
  if (!opt_.protagonist) throw std::invalid_argument("LiveSession: no protagonist policy");
}

LiveSession::~LiveSession() = default;

std::vector<Json> LiveSession::on_message(const std::string& text) {
  ClientMessage m;
  try {
    m = parse_client_message(text);
  } catch (const ProtocolError& e) {
    return {error_message(e.what())};
  }
  switch (m.type) {
    case ClientMessage::Type::kJoin:
      if (joined_) return {error_message("already joined")};
      joined_ = true;
      start_game();
      return {hello_message(opt_.config, opt_.protagonist_id)};
    case ClientMessage::Type::kCmd:
      if (!joined_) return {error_message("join first")};
      latest_ = m.pose;
      return {};
    case ClientMessage::Type::kRestart:
      if (!joined_) return {error_message("join first")};
      if (running_) finish_game(true);
      start_game();
      return {hello_message(opt_.config, opt_.protagonist_id)};
  }
  return {};
}

void LiveSession::start_game() {
  const std::uint64_t seed = derive_seed(opt_.seed, static_cast<std::uint64_t>(game_index_));
  ++game_index_;
  state_ = reset(opt_.config, derive_seed(seed, 0));
  protagonist_ = opt_.protagonist();
  protagonist_->begin_game(derive_seed(seed, 2));
  latest_.reset();
  log_ = TrajectoryLog{};
  log_.config = opt_.config;
  log_.seed = seed;
  log_.meta = Json{{"source", "live"}, {"game_index", game_index_ - 1}};
  log_.ticks.reserve(static_cast<std::size_t>(opt_.config.horizon_ticks) + 1);
  log_.ticks.push_back(make_tick(state_, 0, {}));
  running_ = true;
}

std::vector<Json> LiveSession::tick() {
  if (!running_) return {};
  AgentAction act_a;
  if (latest_) {
    BatPose desired = *latest_;
    const Vec3 rel = desired.center - opt_.config.anchor_a;
    desired.center = opt_.config.anchor_a + clamp_norm(rel, opt_.config.reach_radius);
    act_a = action_towards(state_.bat_a.pose, desired);
  }
  const AgentAction act_p = protagonist_->act(observe(state_, Role::kProtagonist, opt_.config));
  StepResult r = step(state_, act_a, act_p, opt_.config);
  state_ = r.state;
  std::vector<Json> out{state_message(state_, r.events, opt_.config)};
  log_.ticks.push_back(make_tick(state_, r.delta, std::move(r.events)));
  if (r.terminal) {
    out.push_back(game_over_message(state_.score));
    finish_game(false);
  }
  return out;
}

void LiveSession::on_disconnect() {
  if (running_) finish_game(true);
}

void LiveSession::finish_game(bool truncated) {
  running_ = false;
  GameRecord record = make_record(std::move(log_), "human", opt_.protagonist_id, truncated);
  if (!opt_.record_dir.empty()) {
    char name[32];
    std::snprintf(name, sizeof name, "-game-%03d.jsonl", game_index_ - 1);
    save_record(opt_.record_dir + "/" + opt_.record_prefix + name, record);
  }
  if (opt_.on_record) opt_.on_record(record);
}

}  // namespace fencing
