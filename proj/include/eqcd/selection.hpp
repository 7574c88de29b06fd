#pragma once

#include <optional>
#include <random>
#include <span>
#include <string>

#include "eqcd/types.hpp"

namespace eqcd {

enum class RuleId {
  RandomUniform,
  LiProportional,
  Greedy,
  GSs,
  GSqBound,
  GSL,
  GSL1,
  Ratio,
  GS1,
};

const char* to_string(RuleId rule);
RuleId rule_from_string(const std::string& name);

/// Chosen coordinate pair plus the rule-specific criterion value it attained
/// (0 for the random rules, which optimize nothing).
struct PairChoice {
  int i = -1;
  int j = -1;
  double score = 0.0;
};

/// Unordered pair uniform over all n(n-1)/2 pairs, reported in draw order.
PairChoice select_random_pair(int n, std::mt19937_64& rng);

/// i drawn proportional to Li, j from the remaining mass renormalized.
PairChoice select_li_proportional(std::span<const double> Li, std::mt19937_64& rng);

/// i = argmax grad, j = argmin grad, lowest-index ties. A constant gradient
/// collides argmax with argmin; then j advances to the next admissible index
/// and the zero score signals stationarity.
PairChoice select_greedy(std::span<const double> grad);

/// Greedy restricted to coordinates that can move: i over {x_i > l_i + tol},
/// j over {x_j < u_j - tol}. Empty candidate sets mean the rule is blocked
/// and the solver treats the run as converged.
std::optional<PairChoice> select_gs_s(std::span<const double> grad, std::span<const double> x,
                                      const ProblemSpec& spec, double tol = kFeasTol);

/// Exhaustive scan minimizing the truncated quadratic model
/// -m(grad_i - grad_j) + m^2/alpha, m = min{(alpha/2)(grad_i-grad_j),
/// x_i-l_i, u_j-x_j}. score is the model value (<= 0).
PairChoice select_gs_q_bound(std::span<const double> grad, std::span<const double> x,
                             const ProblemSpec& spec, double alpha);

/// argmax (grad_i - grad_j) / sqrt(Li + Lj).
PairChoice select_gsl(std::span<const double> grad, std::span<const double> Li);

/// argmax (grad_i - grad_j) / (sqrt(Li) + sqrt(Lj)).
PairChoice select_gsl_1(std::span<const double> grad, std::span<const double> Li);

/// O(n) surrogate: i = argmax (grad_i - mu)/sqrt(Li), j = argmin, with mu the
/// gradient mean; guarantees grad_i >= mu >= grad_j.
PairChoice select_ratio(std::span<const double> grad, std::span<const double> Li);

}  // namespace eqcd
