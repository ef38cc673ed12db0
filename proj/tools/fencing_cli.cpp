#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fencing/pipeline.hpp"
#include "fencing/server.hpp"

using namespace fencing;

int main(int argc, char** argv) {
  CLI::App app{"Fencing game self-play laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  app.add_option("-c,--config", config_path, "run config (JSON); defaults apply when omitted")
      ->check(CLI::ExistingFile);
  app.add_option("-o,--out", out_dir, "output directory (overrides out_dir)");
  app.add_option("-s,--seed", seed, "master seed (overrides master_seed)");

  auto* warm = app.add_subcommand("train-warmstart", "phase one: warm-start both agents");
  auto* chr = app.add_subcommand("characterize", "phase two: characterization rounds");
  int rounds = 0;
  chr->add_option("--rounds", rounds, "number of rounds (default: config rounds)");
  auto* build = app.add_subcommand("build-library", "train-warmstart followed by characterize");
  auto* tour = app.add_subcommand("tournament", "all protagonists vs all antagonists");
  auto* style = app.add_subcommand("analyze-style", "PCA of the tournament style features");
  auto* select = app.add_subcommand("select-policies", "most separable policies in PC space");
  auto* sysid = app.add_subcommand("sysid", "calibrate the plant model with CMA-ES");
  std::string reference;
  sysid->add_option("--reference", reference, "reference run JSON (default: synthetic)")
      ->check(CLI::ExistingFile);
  auto* eval = app.add_subcommand("eval", "play games between two policies");
  std::string pol_a;
  std::string pol_p;
  int games = 20;
  eval->add_option("--pol-a", pol_a, "antagonist: snapshot id or 'stationary'")->required();
  eval->add_option("--pol-p", pol_p, "protagonist: snapshot id, 'baseline' or 'stationary'")->required();
  eval->add_option("--games", games, "number of games")->check(CLI::PositiveNumber);
  auto* serve = app.add_subcommand("serve", "WebSocket server: human antagonist vs a policy");
  std::string policy = kBaselinePolicy;
  unsigned short port = 8765;
  std::string address = "127.0.0.1";
  serve->add_option("--policy", policy, "protagonist: snapshot id, 'baseline' or 'stationary'");
  serve->add_option("--port", port, "TCP port");
  serve->add_option("--address", address, "bind address");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig config;
    if (!config_path.empty()) config = load_run_config(config_path);
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (seed) config.master_seed = *seed;
    config.validate();

    Json summary;
    if (*warm) {
      summary = run_train_warmstart(config);
      summary.erase("config");
      summary.erase("blocks");
    } else if (*chr) {
      summary = run_characterize(config, rounds > 0 ? rounds : config.rounds);
      summary.erase("config");
      for (auto& r : summary["rounds"]) r.erase("blocks");
    } else if (*build) {
      run_build_library(config);
      summary = Json{{"command", "build-library"}, {"library", run_paths(config).library()}};
    } else if (*tour) {
      summary = run_tournament_command(config);
    } else if (*style) {
      summary = run_analyze_style(config);
    } else if (*select) {
      summary = run_select_policies(config);
    } else if (*sysid) {
      summary = run_sysid(config, reference.empty() ? std::nullopt : std::optional(reference));
    } else if (*eval) {
      summary = run_eval(config, pol_a, pol_p, games);
      summary.erase("scores");
    } else if (*serve) {
      std::optional<PolicyLibrary> lib;
      if (policy != kBaselinePolicy && policy != kStationaryPolicy) {
        lib = PolicyLibrary::load(run_paths(config).library());
      }
      ServerOptions so;
      so.address = address;
      so.port = port;
      so.config = config.game;
      so.protagonist = resolve_policy(policy, Role::kProtagonist, config, lib ? &*lib : nullptr, false);
      so.protagonist_id = policy;
      so.seed = stream_seed(config, SeedStream::kServe);
      so.record_dir = run_paths(config).records_dir();
      so.on_record = [](const GameRecord& r) {
        std::cerr << "game finished: score " << r.final_score << (r.truncated ? " (truncated)" : "")
                  << "\n";
      };
      so.stop_on_signals = true;
      LiveServer server(std::move(so));
      std::cerr << "serving '" << policy << "' on ws://" << address << ":" << server.port() << "\n";
      server.run();
      return 0;
    }
    std::cout << summary.dump(2) << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
