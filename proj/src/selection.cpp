#include "fencing/selection.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fencing {
namespace {

// Relative tolerance under which two criteria values count as tied.
bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::vector<int> select_most_separable(const Eigen::MatrixXd& points, int k) {
  const int n = static_cast<int>(points.rows());
  if (k < 1) throw std::invalid_argument("select_most_separable: k must be >= 1");
  if (n < k) throw std::invalid_argument("select_most_separable: fewer points than k");

  Eigen::MatrixXd dist(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) dist(i, j) = (points.row(i) - points.row(j)).norm();
  }

  std::vector<int> current(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) current[static_cast<std::size_t>(i)] = i;
  std::vector<int> best;
  double best_min = -1.0;
  double best_sum = -1.0;

  // Lexicographic enumeration, so on full ties the first seen set wins.
  while (true) {
    double mn = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (int a = 0; a < k; ++a) {
      for (int b = a + 1; b < k; ++b) {
        const double dd = dist(current[static_cast<std::size_t>(a)], current[static_cast<std::size_t>(b)]);
        mn = std::min(mn, dd);
        sum += dd;
      }
    }
    if (k == 1) mn = 0.0;
    const bool better = best.empty() || (!nearly_equal(mn, best_min) && mn > best_min) ||
                        (nearly_equal(mn, best_min) && !nearly_equal(sum, best_sum) &&
                         sum > best_sum);
    if (better) {
      best = current;
      best_min = mn;
      best_sum = sum;
    }

    int i = k - 1;
    while (i >= 0 && current[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++current[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      current[static_cast<std::size_t>(j)] = current[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return best;
}

}  // namespace fencing
