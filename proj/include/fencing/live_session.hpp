#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fencing/agent.hpp"
#include "fencing/game_record.hpp"

namespace fencing {

// Wire protocol (JSON text frames).
//   client -> server: join {name}, cmd {pos, dir}, restart
//   server -> client: hello {config}, state {...}, game_over {score}, error {message}

enum class Cue { kHigh, kLow, kNone };

const char* cue_name(Cue cue);
/// Scoring ticks ring high (440 Hz), contact penalties low (300 Hz); the
/// camping reward is silent.
Cue cue_for(ScoreKind kind);

struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ClientMessage {
  enum class Type { kJoin, kCmd, kRestart };
  Type type = Type::kJoin;
  std::string name;  // join
  BatPose pose;      // cmd: absolute desired pose, dir normalized
};

/// Throws ProtocolError on malformed JSON, unknown types, missing or
/// non-finite fields. Unknown fields are ignored.
ClientMessage parse_client_message(const std::string& text);

Json hello_message(const GameConfig& config, const std::string& protagonist_id);
Json state_message(const GameState& state, const std::vector<ScoreEvent>& events,
                   const GameConfig& config);
Json game_over_message(int score);
Json error_message(const std::string& message);

/// Transport-free game loop for one connected human (the antagonist) versus
/// a policy (the protagonist). The server feeds it frames and calls tick() at
/// 100 Hz; commands are only latched on receipt and consumed by tick(), so
/// the loop never waits on the network.
class LiveSession {
 public:
  struct Options {
    GameConfig config;
    AgentFactory protagonist;
    std::string protagonist_id;
    std::uint64_t seed = 0;   // game k of the session uses derive_seed(seed, k)
    std::string record_dir;   // empty: records are not written to disk
    std::string record_prefix = "session";  // files are <prefix>-game-<k>.jsonl
    std::function<void(const GameRecord&)> on_record;
  };

  explicit LiveSession(Options options);
  ~LiveSession();

  /// Handles one inbound frame and returns the immediate replies (hello after
  /// join/restart, error for malformed input).
  std::vector<Json> on_message(const std::string& text);
  /// Advances the game by one tick if a game is running: state frame, plus
  /// game_over at the horizon.
  std::vector<Json> tick();
  /// Connection closed: persists a running game as truncated.
  void on_disconnect();

  bool running() const { return running_; }
  int games_started() const { return game_index_; }
  const GameState& state() const { return state_; }

 private:
  void start_game();
  void finish_game(bool truncated);

  Options opt_;
  std::unique_ptr<Agent> protagonist_;
  GameState state_;
  TrajectoryLog log_;
  std::optional<BatPose> latest_;  // most recent human command, sticky
  bool joined_ = false;
  bool running_ = false;
  int game_index_ = 0;
};

}  // namespace fencing
