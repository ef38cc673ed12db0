#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "fencing/coevolution.hpp"
#include "fencing/pca.hpp"
#include "fencing/selection.hpp"
#include "fencing/tournament.hpp"
#include "oracles.hpp"

using namespace fencing;

namespace {

StyleTrajectory line(int n, const Vec3& v, double dt = 0.01) {
  StyleTrajectory t;
  t.dt = dt;
  for (int i = 0; i < n; ++i) t.positions.push_back(Vec3(0.2, -0.1, 1.0) + v * (i * dt));
  t.velocities.assign(static_cast<std::size_t>(n), v);
  return t;
}

}  // namespace

TEST_CASE("featurize: stationary and constant velocity") {
  const StyleFeatures still = featurize_game(line(50, Vec3::Zero()));
  for (int i = 0; i < 7; ++i) CHECK(still.as_array()[i] == 0.0);
  CHECK(still.smoothness == 1.0);

  const StyleFeatures f = featurize_game(line(2001, Vec3(1, 0, 0)));
  CHECK(f.disp_x == doctest::Approx(20.0));
  CHECK(f.disp_y == 0.0);
  CHECK(f.avg_vel == doctest::Approx(1.0));
  CHECK(f.avg_acc == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(f.total_ke == doctest::Approx(10.0));
  CHECK(f.smoothness == doctest::Approx(1.0));
  CHECK(kStyleFeatureNames.size() == 8u);
  CHECK_THROWS_AS(featurize_game(line(3, Vec3::Zero())), std::invalid_argument);
}

TEST_CASE("featurize: translation invariance and time reversal") {
  Rng rng(1);
  StyleTrajectory t;
  Vec3 p = Vec3::Zero();
  for (int i = 0; i < 300; ++i) {
    p += 0.01 * Vec3(standard_normal(rng), standard_normal(rng), standard_normal(rng));
    t.positions.push_back(p);
  }
  const auto base = featurize_game(t).as_array();
  StyleTrajectory shifted = t;
  for (auto& q : shifted.positions) q += Vec3(3, -2, 7);
  const auto s = featurize_game(shifted).as_array();
  StyleTrajectory rev = t;
  std::reverse(rev.positions.begin(), rev.positions.end());
  const auto r = featurize_game(rev).as_array();
  for (int i = 0; i < 8; ++i) {
    CHECK(s[i] == doctest::Approx(base[i]).epsilon(1e-9));
    if (i < 7) CHECK(r[i] == doctest::Approx(base[i]).epsilon(1e-9));
  }
  for (int i = 0; i < 7; ++i) CHECK(base[i] >= 0.0);
  CHECK(base[7] > 0.0);
  CHECK(base[7] <= 1.0);
}

TEST_CASE("pca: subspace data, orthonormality and ratios") {
  Rng rng(2);
  Eigen::MatrixXd basis(3, 8);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 8; ++j) basis(i, j) = standard_normal(rng);
  }
  Eigen::MatrixXd latent(40, 3);
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 3; ++j) latent(i, j) = standard_normal(rng);
  }
  // Equal scales keep the data rank 3 after per-feature z-scoring as well.
  const Eigen::MatrixXd x = latent * basis;
  const PcaFit fit = pca_fit(x, 3);
  CHECK(fit.model.retained_ratio() == doctest::Approx(1.0).epsilon(1e-9));
  const Eigen::MatrixXd gram = fit.model.components * fit.model.components.transpose();
  CHECK((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(fit.projected.rows() == 40);
  CHECK(fit.projected.cols() == 3);
  for (int i = 0; i + 1 < 8; ++i) CHECK(fit.model.explained_ratio[i] >= fit.model.explained_ratio[i + 1] - 1e-15);
  CHECK(fit.model.explained_ratio.sum() <= 1.0 + 1e-12);
  for (int r = 0; r < 3; ++r) {
    Eigen::Index arg;
    fit.model.components.row(r).cwiseAbs().maxCoeff(&arg);
    CHECK(fit.model.components(r, arg) > 0.0);
  }
  CHECK_THROWS(pca_fit(x.topRows(3), 3));
}

TEST_CASE("pca: reconstruction error equals the discarded variance") {
  Rng rng(3);
  Eigen::MatrixXd x(60, 8);
  for (int i = 0; i < 60; ++i) {
    for (int j = 0; j < 8; ++j) x(i, j) = standard_normal(rng) * (j + 1) + (j == 2 ? x(i, 0) : 0.0);
  }
  for (int k = 1; k <= 8; ++k) {
    const PcaFit fit = pca_fit(x, k);
    const Eigen::MatrixXd z = fit.model.standardize(x);
    const Eigen::MatrixXd back = fit.model.reconstruct_standardized(fit.projected);
    const double total = z.squaredNorm();
    const double lost = (z - back).squaredNorm();
    CHECK(lost / total == doctest::Approx(1.0 - fit.model.retained_ratio()).epsilon(1e-9));
    CHECK(back.squaredNorm() <= total * (1 + 1e-12));
  }
}

TEST_CASE("pca handles constant features and rank deficiency") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(4, 8);
  x.col(0) << 1, 2, 3, 4;
  x.col(1) << 2, 4, 6, 8;
  const PcaFit fit = pca_fit(x, 3);
  CHECK(fit.model.retained_ratio() == doctest::Approx(1.0));
  CHECK(fit.model.explained_ratio[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fit.projected.allFinite());
}

TEST_CASE("select_most_separable examples") {
  Eigen::MatrixXd p(4, 3);
  p << 0, 0, 0,
       0, 0, 0,  // duplicate of row 0
       1, 0, 0,
       0, 1, 0;
  const auto s = select_most_separable(p, 3);
  CHECK(s.size() == 3u);
  CHECK(std::count(s.begin(), s.end(), 0) + std::count(s.begin(), s.end(), 1) == 1);
  CHECK(s == oracle::exhaustive_select(p, 3));
  CHECK(select_most_separable(p, 4) == std::vector<int>{0, 1, 2, 3});
  CHECK_THROWS(select_most_separable(p, 5));
  CHECK_THROWS(select_most_separable(p, 0));
}

TEST_CASE("select_most_separable matches exhaustive search and is permutation equivariant") {
  Rng rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 8);
    const int k = 1 + static_cast<int>(rng() % std::min(n, 5));
    Eigen::MatrixXd p(n, 3);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < 3; ++j) p(i, j) = trial % 3 == 0 ? std::round(uniform(rng, 0, 3)) : standard_normal(rng);
    }
    const auto got = select_most_separable(p, k);
    REQUIRE(got == oracle::exhaustive_select(p, k));

    if (trial % 3 != 0 && k >= 2) {  // ties (and k = 1) make the choice order dependent
      std::vector<int> perm(static_cast<std::size_t>(n));
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      Eigen::MatrixXd q(n, 3);
      for (int i = 0; i < n; ++i) q.row(i) = p.row(perm[static_cast<std::size_t>(i)]);
      std::vector<int> mapped;
      for (int i : select_most_separable(q, k)) mapped.push_back(perm[static_cast<std::size_t>(i)]);
      std::sort(mapped.begin(), mapped.end());
      REQUIRE(mapped == got);
    }
  }
}

TEST_CASE("tournament over a library") {
  const GameConfig game;
  Rng rng(5);
  NetworkShape shape;
  shape.hidden = {4};
  PolicyLibrary lib;
  for (int r = 1; r <= 2; ++r) {
    for (Role role : {Role::kAntagonist, Role::kProtagonist}) {
      PolicySnapshot s;
      s.role = role;
      s.phase = 2;
      s.round = r;
      s.update_index = 10;
      s.id = snapshot_id(role, 2, r, 10);
      s.params = make_actor_critic(shape, rng);
      lib.add(s);
    }
    lib.register_pair({r, 0, snapshot_id(Role::kAntagonist, 2, r, 10), snapshot_id(Role::kProtagonist, 2, r, 10)});
  }
  TournamentOptions opt;
  opt.games_per_pair = 1;
  opt.keep_logs = true;
  const TournamentResult a = run_tournament(game, lib, opt, 3);
  CHECK(a.games.size() == 4u);
  CHECK(a.logs.size() == 4u);
  CHECK(a.feature_means.rows() == 2);
  CHECK(a.feature_means.cols() == 8);
  const TournamentResult b = run_tournament(game, lib, opt, 3);
  CHECK(a.feature_means == b.feature_means);
  CHECK(tournament_to_json(a) == tournament_to_json(b));
  // Features per game match a direct featurization of the logged game.
  const auto direct = featurize_game(style_trajectory(a.logs[2], Role::kProtagonist)).as_array();
  CHECK(a.games[2].features.as_array() == direct);
  CHECK(style_table(a).find("nu-p2-r1-u00010") != std::string::npos);

  PolicyLibrary small;
  CHECK_THROWS(run_tournament(game, small, opt, 3));
}
