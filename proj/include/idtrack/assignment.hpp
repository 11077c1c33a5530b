#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace idtrack {

// Minimum-cost assignment on a rectangular cost matrix (shortest augmenting path
// Hungarian method with potentials, O(n^2 m)). Every row of the smaller dimension is
// assigned. Returns, for each row, the assigned column or -1 when rows > cols and the
// row is left over.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

// Sum of cost(i, assignment[i]) over assigned rows.
double assignment_cost(const Eigen::MatrixXd& cost, const std::vector<int>& assignment);

}  // namespace idtrack
