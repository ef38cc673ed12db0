#pragma once

#include <optional>

#include "fencing/agent.hpp"

namespace fencing {

/// Hand-designed blocking protagonist. It places its bat between the target
/// and the point of the antagonist's bat closest to the target, oriented
/// perpendicular to the antagonist's bat with random per-axis offsets, and
/// with some probability re-executes the previous tick's desired pose.
struct HeuristicConfig {
  double angle_offset_deg = 25.0;  // offsets ~ U(-a, a) about x, y, z
  double standoff_min = 0.5;
  double standoff_max = 1.0;
  double hold_probability = 0.5;
  double sword_length = 0.5;
  // false (default): ht = dot / (2 L); true: dot / |h_up - h_low|^2.
  bool textbook_projection = false;

  void validate() const;
};

struct HeuristicState {
  std::optional<BatPose> last_desired;
};

/// ht = clamp((tar - h_low) . (h_up - h_low) / (2 L), 0, 1). Throws
/// std::invalid_argument when h_low == h_up.
double closest_point_param(const Vec3& tar, const Vec3& h_low, const Vec3& h_up,
                           double sword_length, bool textbook_projection = false);

inline Vec3 closest_point_on_bat(const Vec3& h_low, const Vec3& h_up, double ht) {
  return h_low + ht * (h_up - h_low);
}

/// tar + (h_close - tar) * u, u in [0.5, 1].
Vec3 desired_position(const Vec3& tar, const Vec3& h_close, double u);

/// Unit direction perpendicular to `human_dir`, crossing the approach line
/// from the target to `h_close`.
Vec3 perpendicular_direction(const Vec3& human_dir, const Vec3& tar, const Vec3& h_close);

/// Intrinsic x-then-y-then-z composition: Rx(ox) * Ry(oy) * Rz(oz).
Eigen::Matrix3d offset_rotation(const Vec3& offsets_rad);

/// Full record of one heuristic decision, exposed for inspection.
struct HeuristicDecision {
  BatPose fresh;       // pose computed from this observation
  BatPose commanded;   // fresh, or the previous fresh pose when held
  bool held = false;
  Vec3 offsets_rad = Vec3::Zero();
  double standoff = 1.0;
  double ht = 0.0;
};

/// Consumes exactly five uniform draws per call (standoff, three offsets,
/// hold coin) so replays stay aligned. `obs` is from the protagonist's
/// perspective.
HeuristicDecision baseline_decide(const Observation& obs, HeuristicState& state,
                                  const HeuristicConfig& config, const GameConfig& game,
                                  Rng& rng);

AgentAction baseline_act(const Observation& obs, HeuristicState& state,
                         const HeuristicConfig& config, const GameConfig& game, Rng& rng);

class BaselineAgent final : public Agent {
 public:
  BaselineAgent(HeuristicConfig config, GameConfig game);
  void begin_game(std::uint64_t seed) override;
  AgentAction act(const Observation& obs) override;

 private:
  HeuristicConfig config_;
  GameConfig game_;
  HeuristicState state_;
  Rng rng_;
};

}  // namespace fencing
