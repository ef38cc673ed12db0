#include "fencing/pipeline.hpp"

#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>
#include <stdexcept>

#include "fencing/parallel.hpp"
#include "fencing/pca.hpp"
#include "fencing/selection.hpp"

namespace fencing {
namespace fs = std::filesystem;

namespace {

Json config_json(const RunConfig& c) {
  Json j = c;
  j.erase("out_dir");  // artifacts must not depend on where they are written
  return j;
}

PolicyLibrary load_library(const RunConfig& c) {
  const std::string dir = run_paths(c).library();
  if (!fs::exists(fs::path(dir) / "library.json")) {
    throw std::runtime_error("no policy library at " + dir + " (run train-warmstart first)");
  }
  return PolicyLibrary::load(dir);
}

void save_library(const PolicyLibrary& lib, const RunConfig& c) {
  const std::string dir = run_paths(c).library();
  fs::remove_all(dir);
  lib.save(dir);
}

Json blocks_json(const std::vector<BlockRecord>& blocks) {
  Json out = Json::array();
  for (const auto& b : blocks) out.push_back(block_record_to_json(b));
  return out;
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index k = 0; k < m.cols(); ++k) row[static_cast<std::size_t>(k)] = m(i, k);
    rows.push_back(row);
  }
  return rows;
}

Json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

std::string safe_name(const std::string& id) {
  std::string s = id;
  for (char& ch : s) {
    if (ch == '/' || ch == '\\' || ch == ' ') ch = '_';
  }
  return s;
}

}  // namespace

RunPaths run_paths(const RunConfig& config) { return RunPaths{config.out_dir}; }

void write_json(const std::string& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

Json read_json(const std::string& path) { return Json::parse(read_text_file(path)); }

AgentFactory resolve_policy(const std::string& id, Role role, const RunConfig& config,
                            const PolicyLibrary* library, bool deterministic) {
  if (id == kStationaryPolicy) return [] { return std::make_unique<StationaryAgent>(); };
  if (id == kBaselinePolicy) {
    if (role != Role::kProtagonist) throw std::invalid_argument("baseline policy plays the protagonist only");
    return [h = config.heuristic, g = config.game] { return std::make_unique<BaselineAgent>(h, g); };
  }
  if (!library) throw std::invalid_argument("unknown policy '" + id + "' (no library loaded)");
  const SnapshotPtr snap = library->require(id);
  if (snap->role != role) {
    throw std::invalid_argument("policy '" + id + "' is a " + role_name(snap->role) +
                                " snapshot, expected " + role_name(role));
  }
  return snapshot_opponent(snap, config.game, deterministic);
}

Json run_train_warmstart(const RunConfig& c) {
  c.validate();
  PolicyLibrary lib;
  const std::uint64_t seed = stream_seed(c, SeedStream::kWarmstart);
  const PhaseOneResult r = run_phase_one(c.training_context(), c.phase_one, seed, lib);
  save_library(lib, c);
  Json manifest{{"command", "train-warmstart"},
                {"config", config_json(c)},
                {"seed", seed},
                {"warm_antagonist", r.warm_antagonist_id},
                {"warm_protagonist", r.warm_protagonist_id},
                {"blocks", blocks_json(r.blocks)}};
  write_json(run_paths(c).warmstart_manifest(), manifest);
  return manifest;
}

Json run_characterize(const RunConfig& c, int rounds) {
  c.validate();
  if (rounds < 1) throw std::invalid_argument("characterize: rounds must be >= 1");
  const Json warm = read_json(run_paths(c).warmstart_manifest());
  const PolicyLibrary stored = load_library(c);
  // Start from the warm-start snapshots only, so re-running is idempotent.
  PolicyLibrary lib;
  for (Role role : {Role::kAntagonist, Role::kProtagonist}) {
    for (const auto& s : stored.snapshots(role)) {
      if (s->phase == 1) lib.add(*s);
    }
  }
  const std::string warm_a = warm.at("warm_antagonist").get<std::string>();
  const std::string warm_p = warm.at("warm_protagonist").get<std::string>();
  Json round_list = Json::array();
  for (int r = 1; r <= rounds; ++r) {
    const std::uint64_t seed = round_seed(c, r);
    const PhaseTwoResult res =
        run_phase_two(c.training_context(), c.phase_two, warm_a, warm_p, r, seed, lib);
    round_list.push_back({{"round", r},
                          {"seed", seed},
                          {"antagonist", res.antagonist_id},
                          {"protagonist", res.protagonist_id},
                          {"blocks", blocks_json(res.blocks)}});
  }
  save_library(lib, c);
  Json manifest{{"command", "characterize"},
                {"config", config_json(c)},
                {"warm_antagonist", warm_a},
                {"warm_protagonist", warm_p},
                {"rounds", round_list}};
  write_json(run_paths(c).characterize_manifest(), manifest);
  return manifest;
}

Json run_build_library(const RunConfig& c) {
  const Json warm = run_train_warmstart(c);
  const Json chr = run_characterize(c, c.rounds);
  return Json{{"command", "build-library"}, {"warmstart", warm}, {"characterize", chr}};
}

Json run_tournament_command(const RunConfig& c) {
  c.validate();
  const PolicyLibrary lib = load_library(c);
  TournamentOptions opt = c.tournament;
  opt.keep_logs = c.tournament_logs;
  const std::uint64_t seed = stream_seed(c, SeedStream::kTournament);
  const TournamentResult r = run_tournament(c.game, lib, opt, seed);
  const RunPaths paths = run_paths(c);
  fs::remove_all(paths.tournament_dir());
  Json j = tournament_to_json(r);
  j["seed"] = seed;
  j["games_per_pair"] = opt.games_per_pair;
  write_json(paths.tournament_json(), j);
  write_text_file(paths.tournament_dir() + "/style_table.txt", style_table(r));
  if (opt.keep_logs) {
    char name[32];
    for (std::size_t g = 0; g < r.logs.size(); ++g) {
      std::snprintf(name, sizeof name, "/logs/game_%05zu.jsonl", g);
      write_text_file(paths.tournament_dir() + name, trajectory_to_string(r.logs[g]));
    }
  }
  return Json{{"command", "tournament"},
              {"seed", seed},
              {"games", r.games.size()},
              {"protagonists", r.protagonist_ids},
              {"antagonists", r.antagonist_ids}};
}

Json run_analyze_style(const RunConfig& c) {
  c.validate();
  const RunPaths paths = run_paths(c);
  const Json t = read_json(paths.tournament_json());
  const Json& rows = t.at("feature_matrix");
  const int n = static_cast<int>(rows.size());
  if (n < 2) throw std::runtime_error("analyze-style: need at least 2 policies");
  Eigen::MatrixXd x(n, kStyleFeatureCount);
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) {
    ids.push_back(rows[static_cast<std::size_t>(i)].at("id").get<std::string>());
    const auto mean = rows[static_cast<std::size_t>(i)].at("mean").get<std::vector<double>>();
    if (static_cast<int>(mean.size()) != kStyleFeatureCount) {
      throw std::runtime_error("analyze-style: feature row has the wrong length");
    }
    for (int k = 0; k < kStyleFeatureCount; ++k) x(i, k) = mean[static_cast<std::size_t>(k)];
  }
  const int k = std::min(c.style.pca_components, n - 1);
  const PcaFit fit = pca_fit(x, k);
  Json projected = Json::array();
  for (int i = 0; i < n; ++i) {
    std::vector<double> p(static_cast<std::size_t>(k));
    for (int a = 0; a < k; ++a) p[static_cast<std::size_t>(a)] = fit.projected(i, a);
    projected.push_back({{"id", ids[static_cast<std::size_t>(i)]}, {"coords", p}});
  }
  Json j{{"feature_names", kStyleFeatureNames},
         {"components_requested", c.style.pca_components},
         {"components", k},
         {"means", vector_json(fit.model.means)},
         {"stds", vector_json(fit.model.stds)},
         {"component_matrix", matrix_json(fit.model.components)},
         {"explained_ratio", vector_json(fit.model.explained_ratio)},
         {"retained_ratio", fit.model.retained_ratio()},
         {"projected", projected}};
  write_json(paths.pca_json(), j);

  std::ostringstream table;
  char buf[96];
  std::snprintf(buf, sizeof buf, "retained variance (%d components): %.6f\n", k, fit.model.retained_ratio());
  table << buf;
  for (int i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof buf, "%-22s", ids[static_cast<std::size_t>(i)].c_str());
    table << buf;
    for (int a = 0; a < k; ++a) {
      std::snprintf(buf, sizeof buf, " %10.4f", fit.projected(i, a));
      table << buf;
    }
    table << '\n';
  }
  write_text_file(paths.style_dir() + "/pca.txt", table.str());
  return Json{{"command", "analyze-style"}, {"components", k}, {"retained_ratio", fit.model.retained_ratio()}};
}

Json run_select_policies(const RunConfig& c) {
  c.validate();
  const RunPaths paths = run_paths(c);
  const Json pca = read_json(paths.pca_json());
  const Json& proj = pca.at("projected");
  const int n = static_cast<int>(proj.size());
  const int dims = pca.at("components").get<int>();
  Eigen::MatrixXd pts(n, dims);
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) {
    const Json& row = proj[static_cast<std::size_t>(i)];
    ids.push_back(row.at("id").get<std::string>());
    const auto p = row.at("coords").get<std::vector<double>>();
    for (int a = 0; a < dims; ++a) pts(i, a) = p[static_cast<std::size_t>(a)];
  }
  const int k = std::min(c.style.select_count, n);
  const std::vector<int> picked = select_most_separable(pts, k);

  // Map each selected protagonist back to the antagonist of its round.
  std::map<std::string, std::string> partner;
  if (fs::exists(fs::path(paths.library()) / "library.json")) {
    const PolicyLibrary lib = PolicyLibrary::load(paths.library());
    for (const auto& [round, pair] : lib.pairs()) {
      partner[pair.protagonist_id] = pair.antagonist_id;
    }
  }
  Json selected = Json::array();
  for (int i : picked) {
    Json e{{"index", i}, {"protagonist", ids[static_cast<std::size_t>(i)]}};
    if (auto it = partner.find(ids[static_cast<std::size_t>(i)]); it != partner.end()) e["antagonist"] = it->second;
    selected.push_back(e);
  }
  Json j{{"command", "select-policies"}, {"criterion", "max_min_pairwise_distance"}, {"selected", selected}};
  write_json(paths.selection_json(), j);
  return j;
}

Json run_sysid(const RunConfig& c, const std::optional<std::string>& reference_path) {
  c.validate();
  const RunPaths paths = run_paths(c);
  ReferenceRun ref;
  std::optional<HiddenPlant> truth;
  if (reference_path) {
    ref = reference_from_json(read_json(*reference_path));
  } else {
    truth = HiddenPlant::example();
    ref = make_reference_run(*truth, c.sysid.reference_ticks, c.sysid.dt, c.sysid.amplitude,
                             stream_seed(c, SeedStream::kSysIdReference));
    write_json(paths.sysid_dir() + "/reference.json", reference_to_json(ref));
  }
  const CalibrationResult r = calibrate(ref, CalibrationBounds::defaults(),
                                        stream_seed(c, SeedStream::kSysIdCalibrate), c.sysid.calibration);
  Json j = calibration_to_json(r);
  if (truth) {
    const Eigen::VectorXd t = stack_parameters(truth->plant, truth->controller);
    const Eigen::VectorXd e = stack_parameters(r.plant, r.controller);
    j["truth"] = vector_json(t);
    j["max_relative_error"] = ((e - t).cwiseQuotient(t)).cwiseAbs().maxCoeff();
  }
  write_json(paths.sysid_dir() + "/calibration.json", j);
  Json summary{{"command", "sysid"}, {"residual", r.residual}, {"generations", r.search.generations}};
  if (truth) summary["max_relative_error"] = j["max_relative_error"];
  return summary;
}

Json run_eval(const RunConfig& c, const std::string& pol_a, const std::string& pol_p, int games) {
  c.validate();
  if (games < 1) throw std::invalid_argument("eval: games must be >= 1");
  const RunPaths paths = run_paths(c);
  std::optional<PolicyLibrary> lib;
  const bool needs_lib = [&](const std::string& id) {
    return id != kBaselinePolicy && id != kStationaryPolicy;
  }(pol_a) || (pol_p != kBaselinePolicy && pol_p != kStationaryPolicy);
  if (needs_lib) lib = load_library(c);
  const AgentFactory fa = resolve_policy(pol_a, Role::kAntagonist, c, lib ? &*lib : nullptr, false);
  const AgentFactory fp = resolve_policy(pol_p, Role::kProtagonist, c, lib ? &*lib : nullptr, false);
  const std::uint64_t seed = stream_seed(c, SeedStream::kEval);
  const std::string dir = paths.eval_dir() + "/" + safe_name(pol_a) + "_vs_" + safe_name(pol_p);
  fs::remove_all(dir);

  std::vector<int> scores(static_cast<std::size_t>(games));
  parallel_for(games, worker_count(games), [&](int g) {
    auto a = fa();
    auto p = fp();
    TrajectoryLog log;
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(g));
    scores[static_cast<std::size_t>(g)] = play_game(c.game, *a, *p, s, &log).score;
    char name[32];
    std::snprintf(name, sizeof name, "/game_%05d.jsonl", g);
    save_record(dir + name, make_record(std::move(log), pol_a, pol_p));
  });
  double mean = 0.0;
  for (int s : scores) mean += s;
  mean /= games;
  Json j{{"command", "eval"},
         {"antagonist", pol_a},
         {"protagonist", pol_p},
         {"games", games},
         {"seed", seed},
         {"mean_score", mean},
         {"scores", scores}};
  write_json(dir + "/summary.json", j);
  return j;
}

}  // namespace fencing
