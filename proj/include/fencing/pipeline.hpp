#pragma once

#include <optional>
#include <string>

#include "fencing/game_record.hpp"
#include "fencing/run_config.hpp"

namespace fencing {

/// Artifact layout under RunConfig::out_dir. Every file is a pure function
/// of the RunConfig (no timestamps), so re-runs are byte-identical.
struct RunPaths {
  std::string root;

  std::string library() const { return root + "/library"; }
  std::string warmstart_manifest() const { return root + "/warmstart.json"; }
  std::string characterize_manifest() const { return root + "/characterize.json"; }
  std::string tournament_dir() const { return root + "/tournament"; }
  std::string tournament_json() const { return tournament_dir() + "/tournament.json"; }
  std::string style_dir() const { return root + "/style"; }
  std::string pca_json() const { return style_dir() + "/pca.json"; }
  std::string selection_json() const { return style_dir() + "/selection.json"; }
  std::string sysid_dir() const { return root + "/sysid"; }
  std::string eval_dir() const { return root + "/eval"; }
  std::string records_dir() const { return root + "/records"; }
};

RunPaths run_paths(const RunConfig& config);

/// Special policy ids accepted wherever a snapshot id is.
inline constexpr const char* kBaselinePolicy = "baseline";
inline constexpr const char* kStationaryPolicy = "stationary";

/// Resolves "baseline" (protagonist only), "stationary" or a snapshot id in
/// `library` (may be null when only the special ids are used).
AgentFactory resolve_policy(const std::string& id, Role role, const RunConfig& config,
                            const PolicyLibrary* library, bool deterministic);

/// Writes a JSON document with a trailing newline.
void write_json(const std::string& path, const Json& j);
Json read_json(const std::string& path);

// Each command writes its artifacts and returns its manifest.
Json run_train_warmstart(const RunConfig& config);
Json run_characterize(const RunConfig& config, int rounds);
Json run_build_library(const RunConfig& config);
Json run_tournament_command(const RunConfig& config);
Json run_analyze_style(const RunConfig& config);
Json run_select_policies(const RunConfig& config);
/// Calibrates against `reference_path`, or against a synthetic reference
/// from HiddenPlant::example() when none is given.
Json run_sysid(const RunConfig& config, const std::optional<std::string>& reference_path);
Json run_eval(const RunConfig& config, const std::string& pol_a, const std::string& pol_p,
              int games);

}  // namespace fencing
