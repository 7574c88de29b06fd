#pragma once

#include <span>
#include <vector>

#include "eqcd/selection.hpp"
#include "eqcd/types.hpp"

namespace eqcd {

enum class StepMode {
  FixedInvL2,  // alpha = 1/L2
  FixedInvL1,  // alpha = 1/L1 = 2/L2
  LiPairwise,  // delta = -(grad_i - grad_j)/(L_i + L_j), no scalar alpha
  Explicit,
};

struct StepPolicy {
  StepMode mode = StepMode::FixedInvL2;
  double alpha = 0.0;  // Explicit only

  static StepPolicy fixed_inv_l2() { return {StepMode::FixedInvL2, 0.0}; }
  static StepPolicy fixed_inv_l1() { return {StepMode::FixedInvL1, 0.0}; }
  static StepPolicy li_pairwise() { return {StepMode::LiPairwise, 0.0}; }
  static StepPolicy explicit_alpha(double a) { return {StepMode::Explicit, a}; }

  /// Scalar step size; throws for LiPairwise, which has no single alpha.
  double resolve(const LipschitzInfo& L) const;
};

/// Equality-only update: delta = -(alpha/2)(grad_i - grad_j) applied as
/// (+delta on i, -delta on j). A zero delta yields an empty Direction.
Direction step_equality(std::span<const double> grad, const PairChoice& pair, double alpha);

/// Bound-respecting update: magnitude m = min{(alpha/2)(grad_i - grad_j),
/// x_i - l_i, u_j - x_j} (infinite slacks skipped); moves -m on i, +m on j,
/// flagging whichever slack was binding. Requires grad_i >= grad_j.
Direction step_bound(std::span<const double> grad, const PairChoice& pair,
                     std::span<const double> x, const ProblemSpec& spec, double alpha);

/// Coordinate-wise-constant update: delta = -(grad_i - grad_j)/(L_i + L_j).
Direction step_li(std::span<const double> grad, const PairChoice& pair,
                  std::span<const double> Li);

/// step_li truncated at the bounds, for the pairwise policy on box problems.
Direction step_li_bound(std::span<const double> grad, const PairChoice& pair,
                        std::span<const double> x, const ProblemSpec& spec,
                        std::span<const double> Li);

/// Full steepest-descent direction in the 1-norm over
/// {d : sum d = 0, l <= x + d <= u}: minimizes grad'd + (1/(2 alpha))||d||_1^2.
/// Sorted two-pointer scan, O(n log n); at most the two marginal coordinates
/// end strictly interior, every other support coordinate lands on its bound.
/// advances, when given, receives the total number of pointer moves.
Direction gs1_direction(std::span<const double> grad, std::span<const double> x,
                        const ProblemSpec& spec, double alpha, int* advances = nullptr);

/// Two-coordinate steepest-descent solution for the unbounded case: greedy
/// pair with delta = -(alpha/4)(grad_i - grad_j).
Direction gs1_pair_equality(std::span<const double> grad, double alpha);

/// grad'd + (1/(2 alpha)) ||d||_1^2 for a sparse direction.
double steepest_value_1norm(std::span<const double> grad, const Direction& d, double alpha);

/// Splits a sum-zero vector into 2-sparse sum-zero components with one
/// positive and one negative entry each, sign-conformal to d, pairing
/// lowest-index positives with lowest-index negatives. At most
/// max(supp(d)-1, 1) components.
std::vector<std::vector<double>> conformal_decompose(std::span<const double> d,
                                                     double tol = 1e-10);

}  // namespace eqcd
