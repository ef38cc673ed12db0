#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fencing/agent.hpp"
#include "fencing/policy_library.hpp"
#include "fencing/style.hpp"

namespace fencing {

struct Entrant {
  std::string id;
  AgentFactory factory;
};

struct TournamentGame {
  int protagonist = 0;  // index into protagonists
  int antagonist = 0;   // index into antagonists
  std::uint64_t seed = 0;
  int score = 0;
  StyleFeatures features;  // protagonist features for this game
};

struct TournamentResult {
  std::vector<std::string> protagonist_ids;
  std::vector<std::string> antagonist_ids;
  std::vector<TournamentGame> games;
  std::vector<TrajectoryLog> logs;  // filled only when requested, game order
  Eigen::MatrixXd feature_means;    // protagonists x 8
  Eigen::MatrixXd feature_stds;     // protagonists x 8, population std
};

struct TournamentOptions {
  int games_per_pair = 100;
  bool stochastic = true;  // policies sample actions as during training
  bool keep_logs = false;
};

/// Every protagonist plays games_per_pair games against every antagonist;
/// a protagonist's style is its mean feature vector over all of its games.
TournamentResult run_tournament(const GameConfig& game, const std::vector<Entrant>& protagonists,
                                const std::vector<Entrant>& antagonists,
                                const TournamentOptions& options, std::uint64_t seed);

/// Tournament between the characterized pairs of `library` (all registered
/// protagonists vs all registered antagonists). Throws if fewer than two
/// pairs are registered.
TournamentResult run_tournament(const GameConfig& game, const PolicyLibrary& library,
                                const TournamentOptions& options, std::uint64_t seed);

Json tournament_to_json(const TournamentResult& result);
/// Plain-text table of mean +- std per feature per protagonist.
std::string style_table(const TournamentResult& result);

}  // namespace fencing
