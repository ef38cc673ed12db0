#include "fencing/tournament.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "fencing/coevolution.hpp"
#include "fencing/parallel.hpp"
#include "fencing/rollout.hpp"

namespace fencing {

TournamentResult run_tournament(const GameConfig& game, const std::vector<Entrant>& protagonists,
                                const std::vector<Entrant>& antagonists,
                                const TournamentOptions& options, std::uint64_t seed) {
  if (protagonists.empty() || antagonists.empty()) {
    throw std::invalid_argument("run_tournament: no entrants");
  }
  if (options.games_per_pair < 1) {
    throw std::invalid_argument("run_tournament: games_per_pair must be >= 1");
  }
  const int np = static_cast<int>(protagonists.size());
  const int na = static_cast<int>(antagonists.size());
  const int per = options.games_per_pair;
  const int total = np * na * per;

  TournamentResult out;
  for (const auto& e : protagonists) out.protagonist_ids.push_back(e.id);
  for (const auto& e : antagonists) out.antagonist_ids.push_back(e.id);
  out.games.resize(static_cast<std::size_t>(total));
  if (options.keep_logs) out.logs.resize(static_cast<std::size_t>(total));

  parallel_for(total, worker_count(total), [&](int g) {
    TournamentGame& tg = out.games[static_cast<std::size_t>(g)];
    tg.protagonist = g / (na * per);
    tg.antagonist = (g / per) % na;
    tg.seed = derive_seed(seed, static_cast<std::uint64_t>(g));
    auto p = protagonists[static_cast<std::size_t>(tg.protagonist)].factory();
    auto a = antagonists[static_cast<std::size_t>(tg.antagonist)].factory();
    TrajectoryLog log;
    tg.score = play_game(game, *a, *p, tg.seed, &log).score;
    tg.features = featurize_game(style_trajectory(log, Role::kProtagonist));
    if (options.keep_logs) {
      log.meta = Json{{"protagonist", protagonists[static_cast<std::size_t>(tg.protagonist)].id},
                      {"antagonist", antagonists[static_cast<std::size_t>(tg.antagonist)].id}};
      out.logs[static_cast<std::size_t>(g)] = std::move(log);
    }
  });

  out.feature_means = Eigen::MatrixXd::Zero(np, kStyleFeatureCount);
  out.feature_stds = Eigen::MatrixXd::Zero(np, kStyleFeatureCount);
  const double count = static_cast<double>(na * per);
  for (const auto& g : out.games) {
    const auto f = g.features.as_array();
    for (int j = 0; j < kStyleFeatureCount; ++j) out.feature_means(g.protagonist, j) += f[static_cast<std::size_t>(j)] / count;
  }
  for (const auto& g : out.games) {
    const auto f = g.features.as_array();
    for (int j = 0; j < kStyleFeatureCount; ++j) {
      const double d = f[static_cast<std::size_t>(j)] - out.feature_means(g.protagonist, j);
      out.feature_stds(g.protagonist, j) += d * d / count;
    }
  }
  out.feature_stds = out.feature_stds.cwiseSqrt();
  return out;
}

TournamentResult run_tournament(const GameConfig& game, const PolicyLibrary& library,
                                const TournamentOptions& options, std::uint64_t seed) {
  if (library.pairs().size() < 2) {
    throw std::invalid_argument("run_tournament: library needs at least 2 characterized pairs");
  }
  std::vector<Entrant> pros;
  std::vector<Entrant> ants;
  for (const auto& [round, pair] : library.pairs()) {
    const auto p = library.require(pair.protagonist_id);
    const auto a = library.require(pair.antagonist_id);
    pros.push_back({p->id, snapshot_opponent(p, game, !options.stochastic)});
    ants.push_back({a->id, snapshot_opponent(a, game, !options.stochastic)});
  }
  return run_tournament(game, pros, ants, options, seed);
}

Json tournament_to_json(const TournamentResult& r) {
  Json games = Json::array();
  for (const auto& g : r.games) {
    const auto f = g.features.as_array();
    games.push_back({{"protagonist", r.protagonist_ids[static_cast<std::size_t>(g.protagonist)]},
                     {"antagonist", r.antagonist_ids[static_cast<std::size_t>(g.antagonist)]},
                     {"seed", g.seed},
                     {"score", g.score},
                     {"features", std::vector<double>(f.begin(), f.end())}});
  }
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < r.feature_means.rows(); ++i) {
    std::vector<double> mean(r.feature_means.cols());
    std::vector<double> std(r.feature_stds.cols());
    for (Eigen::Index j = 0; j < r.feature_means.cols(); ++j) {
      mean[static_cast<std::size_t>(j)] = r.feature_means(i, j);
      std[static_cast<std::size_t>(j)] = r.feature_stds(i, j);
    }
    rows.push_back({{"id", r.protagonist_ids[static_cast<std::size_t>(i)]}, {"mean", mean}, {"std", std}});
  }
  return Json{{"feature_names", kStyleFeatureNames},
              {"protagonists", r.protagonist_ids},
              {"antagonists", r.antagonist_ids},
              {"feature_matrix", rows},
              {"games", games}};
}

std::string style_table(const TournamentResult& r) {
  std::ostringstream ss;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-22s", "policy");
  ss << buf;
  for (const char* name : kStyleFeatureNames) {
    std::snprintf(buf, sizeof buf, " %24s", name);
    ss << buf;
  }
  ss << '\n';
  for (Eigen::Index i = 0; i < r.feature_means.rows(); ++i) {
    std::snprintf(buf, sizeof buf, "%-22s", r.protagonist_ids[static_cast<std::size_t>(i)].c_str());
    ss << buf;
    for (Eigen::Index j = 0; j < r.feature_means.cols(); ++j) {
      std::snprintf(buf, sizeof buf, " %11.5g +- %-10.4g", r.feature_means(i, j), r.feature_stds(i, j));
      ss << buf;
    }
    ss << '\n';
  }
  return ss.str();
}

}  // namespace fencing
