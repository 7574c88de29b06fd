#pragma once

#include <span>

#include "eqcd/types.hpp"

namespace eqcd {

/// True iff |sum_i w_i x_i - gamma| <= tol and l_i - tol <= x_i <= u_i + tol.
bool check_feasible(std::span<const double> x, const ProblemSpec& spec, double tol = kFeasTol);

/// Nearest feasible point to x0. Without bounds this is x0 shifted along the
/// weight vector; with bounds, the Euclidean projection found by bisection on
/// the shift multiplier. Result satisfies check_feasible at 1e-10.
std::vector<double> project_to_feasible(std::span<const double> x0, const ProblemSpec& spec);

/// x += d, snapping coordinates flagged AtLower/AtUpper exactly onto their
/// bound so later at-bound tests can compare exactly.
void apply_direction(std::span<double> x, const Direction& d, const ProblemSpec& spec);

}  // namespace eqcd
