#pragma once

#include <optional>
#include <vector>

namespace ndho::smallmat {

using Matrix = std::vector<std::vector<double>>;

// Numeric rank by Gaussian elimination with partial pivoting; tol is
// relative to the largest absolute entry.
int rank(Matrix a, double tol = 1e-8);

// Least-squares solution of A x = b through the normal equations; nullopt
// when A^T A is numerically singular. Sized for the handful-of-unknowns
// systems this project needs.
std::optional<std::vector<double>> solve_least_squares(const Matrix& a,
                                                       const std::vector<double>& b);

}  // namespace ndho::smallmat
