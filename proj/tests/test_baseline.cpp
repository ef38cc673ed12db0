#include <doctest.h>

#include "fencing/baseline.hpp"

using namespace fencing;

namespace {

Observation protagonist_obs(const GameConfig& c, const BatPose& human, const BatPose& robot) {
  GameState s = reset(c, 0);
  s.bat_a.pose = human;
  s.bat_p.pose = robot;
  return observe(s, Role::kProtagonist, c);
}

Vec3 random_unit(Rng& rng) {
  return Vec3(standard_normal(rng), standard_normal(rng), standard_normal(rng)).normalized();
}

}  // namespace

TEST_CASE("closest_point_param examples") {
  CHECK(closest_point_param({0, 0, 0}, {1, 0, 0}, {1, 1, 0}, 1.0) == 0.0);
  CHECK(closest_point_param({0, 0, 0}, {0, 0, -5}, {0, 0, -3}, 1.0) == 1.0);
  CHECK(closest_point_on_bat({0, 0, -5}, {0, 0, -3}, 1.0) == Vec3(0, 0, -3));
  CHECK(closest_point_param({1, 2, 3}, {1, 2, 3}, {1, 2, 4}, 1.0) == 0.0);
  // Interior: dot 0.5 over 2 L = 1 gives 0.25 ...
  CHECK(closest_point_param({0, 0.5, 0}, {0, 0, 0}, {0, 1, 0}, 0.5) == doctest::Approx(0.5));
  CHECK(closest_point_param({0, 0.5, 0}, {0, 0, 0}, {0, 1, 0}, 1.0) == doctest::Approx(0.25));
  // ... while the textbook projection gives the true foot point.
  CHECK(closest_point_param({0, 0.5, 0}, {0, 0, 0}, {0, 1, 0}, 1.0, true) == doctest::Approx(0.5));
  CHECK_THROWS_AS(closest_point_param({0, 0, 0}, {1, 1, 1}, {1, 1, 1}, 1.0), std::invalid_argument);
}

TEST_CASE("ht stays in [0, 1] and h_close on the bat") {
  Rng rng(1);
  for (int i = 0; i < 100000; ++i) {
    const Vec3 tar(uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2));
    const Vec3 lo(uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2));
    const double len = uniform(rng, 0.1, 1.5);
    const Vec3 up = lo + len * random_unit(rng);
    const double ht = closest_point_param(tar, lo, up, len);
    REQUIRE(ht >= 0.0);
    REQUIRE(ht <= 1.0);
    const Vec3 hc = closest_point_on_bat(lo, up, ht);
    REQUIRE(((hc - lo).cross(up - lo)).norm() < 1e-9);
  }
}

TEST_CASE("desired_position examples") {
  CHECK(desired_position({0, 0, 0}, {1, 0, 0}, 0.5) == Vec3(0.5, 0, 0));
  CHECK(desired_position({0.1, 0.2, 0.3}, {1, 2, 3}, 1.0) == Vec3(1, 2, 3));
  CHECK(desired_position({1, 1, 1}, {1, 1, 1}, 0.7) == Vec3(1, 1, 1));
}

TEST_CASE("perpendicular_direction") {
  Rng rng(2);
  for (int i = 0; i < 10000; ++i) {
    const Vec3 hd = random_unit(rng);
    const Vec3 tar = Vec3::Random();
    const Vec3 hc = i % 50 == 0 ? tar : Vec3(Vec3::Random());
    const Vec3 d = perpendicular_direction(hd, tar, hc);
    REQUIRE(d.norm() == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(std::abs(d.dot(hd)) < 1e-9);
  }
  // Degenerate: approach line parallel to the human bat.
  const Vec3 d = perpendicular_direction(Vec3::UnitZ(), Vec3::Zero(), Vec3(0, 0, 1));
  CHECK(std::abs(d.dot(Vec3::UnitZ())) < 1e-12);
}

TEST_CASE("offset_rotation composes x then y then z") {
  const Vec3 o(0.1, -0.2, 0.3);
  const Eigen::Matrix3d expected = (Eigen::AngleAxisd(o.x(), Vec3::UnitX()) *
                                    Eigen::AngleAxisd(o.y(), Vec3::UnitY()) *
                                    Eigen::AngleAxisd(o.z(), Vec3::UnitZ()))
                                       .toRotationMatrix();
  CHECK((offset_rotation(o) - expected).norm() < 1e-14);
  CHECK((offset_rotation(Vec3::Zero()) - Eigen::Matrix3d::Identity()).norm() == 0.0);
}

TEST_CASE("baseline_decide: perpendicular with zero offsets") {
  const GameConfig c;
  HeuristicConfig h;
  h.angle_offset_deg = 0.0;
  Rng rng(3);
  HeuristicState st;
  for (int i = 0; i < 2000; ++i) {
    const BatPose human{c.target_center + 0.3 * Vec3::Random(), random_unit(rng)};
    const BatPose robot{c.anchor_p + Vec3(0.3, 0, 0), Vec3::UnitZ()};
    const HeuristicDecision d = baseline_decide(protagonist_obs(c, human, robot), st, h, c, rng);
    REQUIRE(std::abs(d.fresh.dir.dot(human.dir)) < 1e-9);
    REQUIRE(d.offsets_rad == Vec3::Zero());
  }
}

TEST_CASE("baseline_decide: offsets, standoff and hold statistics") {
  const GameConfig c;
  const HeuristicConfig h;
  Rng rng(4);
  HeuristicState st;
  int held = 0;
  std::optional<BatPose> previous_fresh;
  const int n = 10000;
  const double limit = 25.0 * M_PI / 180.0;
  for (int i = 0; i < n; ++i) {
    const BatPose human{c.target_center + 0.3 * Vec3::Random(), random_unit(rng)};
    const BatPose robot{c.anchor_p + Vec3(0.3, 0, 0), Vec3::UnitZ()};
    const HeuristicDecision d = baseline_decide(protagonist_obs(c, human, robot), st, h, c, rng);
    REQUIRE(d.offsets_rad.cwiseAbs().maxCoeff() <= limit);
    REQUIRE(d.standoff >= 0.5);
    REQUIRE(d.standoff <= 1.0);
    const double angle = std::acos(std::clamp(d.fresh.dir.dot(human.dir), -1.0, 1.0)) * 180.0 / M_PI;
    REQUIRE(angle >= 45.0);
    REQUIRE(angle <= 135.0);
    if (d.held) {
      ++held;
      REQUIRE(previous_fresh.has_value());
      REQUIRE(d.commanded == *previous_fresh);
    } else {
      REQUIRE(d.commanded == d.fresh);
    }
    previous_fresh = d.fresh;
  }
  CHECK(std::abs(held / double(n) - 0.5) < 0.02);
}

TEST_CASE("baseline agent replays bit exact") {
  const GameConfig c;
  BaselineAgent a(HeuristicConfig{}, c), b(HeuristicConfig{}, c);
  a.begin_game(9);
  b.begin_game(9);
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const Observation obs =
        protagonist_obs(c, {c.target_center + 0.3 * Vec3::Random(), random_unit(rng)},
                        {c.anchor_p + Vec3(0.3, 0, 0), Vec3::UnitZ()});
    const AgentAction x = a.act(obs), y = b.act(obs);
    REQUIRE(x.d_pos == y.d_pos);
    REQUIRE(x.d_dir == y.d_dir);
  }
}

TEST_CASE("baseline blocks a target-seeking antagonist") {
  const GameConfig c;
  // Antagonist walks straight into the target and stays.
  ScriptedAgent attacker([&](const Observation& obs) {
    return action_towards(bat_from_observation(obs, 0).pose, {c.target_center, Vec3::UnitY()});
  });
  StationaryAgent idle;
  BaselineAgent blocker(HeuristicConfig{}, c);
  const int free_score = play_game(c, attacker, idle, 1).score;
  const int blocked_score = play_game(c, attacker, blocker, 1).score;
  CHECK(blocked_score < free_score);
}

TEST_CASE("heuristic config validation") {
  HeuristicConfig h;
  CHECK_NOTHROW(h.validate());
  h.hold_probability = 1.5;
  CHECK_THROWS(h.validate());
}
