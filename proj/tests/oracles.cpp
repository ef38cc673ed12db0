#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  double t = (p - a).dot(ab) / ab.dot(ab);
  t = std::clamp(t, 0.0, 1.0);
  return (a + t * ab - p).norm();
}

double segment_distance(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1) {
  double best = std::min({point_segment_distance(a0, b0, b1), point_segment_distance(a1, b0, b1),
                          point_segment_distance(b0, a0, a1), point_segment_distance(b1, a0, a1)});
  // Interior stationary point of f(s, t) = |a0 + s u - b0 - t v|^2.
  const Vec3 u = a1 - a0;
  const Vec3 v = b1 - b0;
  const Vec3 w = a0 - b0;
  const double A = u.dot(u), B = u.dot(v), C = v.dot(v), D = u.dot(w), E = v.dot(w);
  const double det = A * C - B * B;
  if (det > 1e-14 * A * C) {
    const double s = (B * E - C * D) / det;
    const double t = (A * E - B * D) / det;
    if (s >= 0.0 && s <= 1.0 && t >= 0.0 && t <= 1.0) {
      best = std::min(best, (a0 + s * u - b0 - t * v).norm());
    }
  }
  return best;
}

std::vector<int> score_log(const fencing::TrajectoryLog& log) {
  const auto& c = log.config;
  auto ends = [&](const fencing::BatState& b) {
    return std::pair<Vec3, Vec3>{b.pose.center - 0.5 * c.bat_length * b.pose.dir,
                                 b.pose.center + 0.5 * c.bat_length * b.pose.dir};
  };
  std::vector<int> deltas;
  int streak = 0;
  for (const auto& t : log.ticks) {
    if (t.tick == 0) {
      deltas.push_back(0);
      continue;
    }
    int d = 0;
    const auto [a0, a1] = ends(t.bat_a);
    const auto [p0, p1] = ends(t.bat_p);
    if (point_segment_distance(c.target_center, a0, a1) <= c.target_radius) {
      d += segment_distance(a0, a1, p0, p1) < 2.0 * c.bat_radius ? c.penalty_contact : c.score_in_target;
    }
    if (point_segment_distance(c.target_center, p0, p1) <= c.target_radius) {
      if (++streak == c.camping_ticks) {
        d += c.reward_camping;
        streak = 0;
      }
    } else {
      streak = 0;
    }
    deltas.push_back(d);
  }
  return deltas;
}

}  // namespace oracle

namespace oracle {

GradientCase make_gradient_case(std::uint64_t seed) {
  using namespace fencing;
  Rng rng(seed);
  GradientCase gc;
  NetworkShape shape;
  shape.obs_size = 3 + static_cast<int>(rng() % 5);
  shape.action_size = 1 + static_cast<int>(rng() % 4);
  shape.hidden = {2 + static_cast<int>(rng() % 5), 2 + static_cast<int>(rng() % 4)};
  shape.initial_log_std = uniform(rng, -1.0, 0.0);
  gc.ac = make_actor_critic(shape, rng);
  // Larger output weights than the default init so every path matters.
  Eigen::VectorXd flat = flatten(gc.ac);
  for (Eigen::Index i = 0; i < flat.size(); ++i) flat[i] += 0.3 * standard_normal(rng);
  unflatten(gc.ac, flat);

  gc.config.clip = 0.2;
  gc.config.entropy_coef = 0.01 * static_cast<double>(seed % 3);
  gc.config.value_coef = 0.5;
  const int n = 8 + static_cast<int>(rng() % 24);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd obs(shape.obs_size);
    for (int k = 0; k < shape.obs_size; ++k) obs[k] = standard_normal(rng);
    const SampledAction s = sample_action(gc.ac.policy, obs, rng);
    // Behaviour log-prob offset so ratios spread over both sides of the clip
    // range, but never within 1e-3 of a kink.
    double shift = 0.0;
    for (;;) {
      shift = uniform(rng, -0.5, 0.5);
      const double rho = std::exp(shift);
      if (std::abs(rho - 0.8) > 1e-3 && std::abs(rho - 1.2) > 1e-3) break;
    }
    gc.batch.obs.push_back(obs);
    gc.batch.actions.push_back(s.action);
    gc.batch.log_prob.push_back(s.log_prob - shift);
    gc.batch.reward.push_back(standard_normal(rng));
    gc.batch.value.push_back(standard_normal(rng));
    gc.batch.terminal.push_back(i == n - 1);
    gc.advantages.push_back(standard_normal(rng));
    gc.returns.push_back(standard_normal(rng));
  }
  return gc;
}

double ppo_gradient_relative_error(const GradientCase& gc, double h) {
  using namespace fencing;
  const LossResult base = ppo_loss_and_grad(gc.ac, gc.batch, gc.advantages, gc.returns, gc.config);
  const Eigen::VectorXd x0 = flatten(gc.ac);
  Eigen::VectorXd fd(x0.size());
  ActorCritic probe = gc.ac;
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    Eigen::VectorXd x = x0;
    x[i] = x0[i] + h;
    unflatten(probe, x);
    const double up = ppo_loss_and_grad(probe, gc.batch, gc.advantages, gc.returns, gc.config).loss;
    x[i] = x0[i] - h;
    unflatten(probe, x);
    const double down = ppo_loss_and_grad(probe, gc.batch, gc.advantages, gc.returns, gc.config).loss;
    fd[i] = (up - down) / (2.0 * h);
  }
  const double scale = std::max({base.gradient.norm(), fd.norm(), 1e-12});
  return (base.gradient - fd).norm() / scale;
}

std::vector<int> exhaustive_select(const Eigen::MatrixXd& p, int k) {
  const int n = static_cast<int>(p.rows());
  std::vector<int> best;
  double best_min = -1, best_sum = -1;
  for (int mask = 0; mask < (1 << n); ++mask) {
    if (__builtin_popcount(static_cast<unsigned>(mask)) != k) continue;
    std::vector<int> s;
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) s.push_back(i);
    }
    double mn = k == 1 ? 0.0 : 1e300, sum = 0;
    for (std::size_t a = 0; a < s.size(); ++a) {
      for (std::size_t b = a + 1; b < s.size(); ++b) {
        const double d = (p.row(s[a]) - p.row(s[b])).norm();
        mn = std::min(mn, d);
        sum += d;
      }
    }
    const double tol = 1e-12 * std::max(1.0, std::abs(mn));
    const bool better = best.empty() || mn > best_min + tol ||
                        (std::abs(mn - best_min) <= tol && sum > best_sum + 1e-12 * std::max(1.0, sum)) ||
                        (std::abs(mn - best_min) <= tol && std::abs(sum - best_sum) <= 1e-12 * std::max(1.0, sum) &&
                         s < best);
    if (better) {
      best = s;
      best_min = mn;
      best_sum = sum;
    }
  }
  return best;
}

}  // namespace oracle
