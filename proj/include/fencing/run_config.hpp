#pragma once

#include <cstdint>
#include <string>

#include "fencing/baseline.hpp"
#include "fencing/calibrate.hpp"
#include "fencing/coevolution.hpp"
#include "fencing/tournament.hpp"

namespace fencing {

struct SysIdConfig {
  int reference_ticks = 1000;
  double dt = 0.01;
  double amplitude = 0.3;  // m, largest step target per axis
  CalibrationOptions calibration;
};

struct StyleConfig {
  int pca_components = 3;
  int select_count = 3;
};

/// Everything a CLI command needs. All seeds are derived from master_seed.
struct RunConfig {
  GameConfig game;
  PpoConfig ppo;
  NetworkShape network;
  PhaseConfig phase_one = PhaseConfig::phase_one_defaults();
  PhaseConfig phase_two = PhaseConfig::phase_two_defaults();
  int rounds = 6;  // characterized pairs in the library
  TournamentOptions tournament;
  bool tournament_logs = false;  // write one trajectory log per tournament game
  StyleConfig style;
  HeuristicConfig heuristic;
  SysIdConfig sysid;
  std::string out_dir = "run";
  std::uint64_t master_seed = 1;

  void validate() const;
  TrainingContext training_context() const { return {game, ppo, network}; }
};

enum class SeedStream : std::uint64_t {
  kWarmstart = 1,
  kCharacterize = 2,
  kTournament = 3,
  kSysIdReference = 4,
  kSysIdCalibrate = 5,
  kEval = 6,
  kServe = 7,
};

std::uint64_t stream_seed(const RunConfig& config, SeedStream stream);
/// Round r of characterization uses its own stream so rounds are independent
/// of how many rounds are run.
std::uint64_t round_seed(const RunConfig& config, int round);

/// Partial JSON is allowed; missing keys keep their defaults, unknown keys
/// are rejected so typos fail loudly.
void to_json(Json& j, const RunConfig& config);
void from_json(const Json& j, RunConfig& config);
RunConfig load_run_config(const std::string& path);

Json phase_config_to_json(const PhaseConfig& phase);
PhaseConfig phase_config_from_json(const Json& j, PhaseConfig defaults);

}  // namespace fencing
