#pragma once

#include <vector>

#include <Eigen/Dense>

namespace fencing {

/// Size-k subset of the rows of `points` maximising the minimum pairwise
/// Euclidean distance. Ties go to the larger sum of pairwise distances, then
/// to the lexicographically smallest index set. Exhaustive over C(n, k).
/// Throws std::invalid_argument when n < k or k < 1.
std::vector<int> select_most_separable(const Eigen::MatrixXd& points, int k);

}  // namespace fencing
