#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "eqcd/selection.hpp"
#include "eqcd/types.hpp"

// Brute-force references for property tests and the verify command. These
// never sit on the solver path; they re-derive each criterion from scratch so
// agreement is meaningful.
namespace eqcd::oracle {

enum class PairModel { AbsDiff, GSqEquality, GSqBound, GSL, GSL1 };

/// O(n^2) enumeration of the model over all ordered pairs, lexicographic
/// tie-break. Li is required for the GSL/GSL1 models.
PairChoice exhaustive_pair(std::span<const double> grad, std::span<const double> x,
                           const ProblemSpec& spec, double alpha, PairModel model,
                           std::span<const double> Li = {});

struct SteepestResult {
  std::vector<double> d;
  double value = 0.0;
};

/// Grid search for min grad'd + (1/(2 alpha)) (sum_k w_k |d_k|)^2 over
/// {sum d = 0, l <= x + d <= u}, n <= 4. Shrinking grids to resolution 1e-3
/// of the feasible box, then coordinate-wise golden-section polish to 1e-7.
/// norm_weights defaults to all-ones (the plain 1-norm).
SteepestResult steepest_descent_grid(std::span<const double> grad, std::span<const double> x,
                                     const ProblemSpec& spec, double alpha,
                                     std::span<const double> norm_weights = {});

/// Coordinate-pair exchange descent on the same objective from d = 0: applies
/// the single pair move with the best exact 1-D improvement until no move
/// improves by more than 1e-12. Upper-bound certificate for large n.
SteepestResult pairwise_exchange(std::span<const double> grad, std::span<const double> x,
                                 const ProblemSpec& spec, double alpha,
                                 std::int64_t max_moves = 10000);

/// Solves min 1/2 x'Hx - g'x subject to sum x = gamma through the dense
/// (n+1)x(n+1) KKT system (own pivoted elimination, no external solver).
/// Verifies the residual to 1e-10 relative and throws on singularity.
std::vector<double> kkt_equality(std::span<const double> H, std::span<const double> g,
                                 double gamma);

/// Weighted variant: constraint sum_i a_i x_i = gamma.
std::vector<double> kkt_equality_weighted(std::span<const double> H, std::span<const double> g,
                                          std::span<const double> a, double gamma);

}  // namespace eqcd::oracle
