#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "eqcd/objective.hpp"
#include "eqcd/selection.hpp"
#include "eqcd/step.hpp"
#include "eqcd/types.hpp"

namespace eqcd {

struct SolverConfig {
  RuleId rule = RuleId::Greedy;
  StepPolicy policy = StepPolicy::fixed_inv_l2();
  std::int64_t max_iters = 100000;
  double opt_tol = 1e-10;
  std::uint64_t seed = 0;
  std::int64_t trace_every = 1;
  std::int64_t resync_every = 10000;  // feasibility re-projection cadence
  // Called with every emitted record and the current iterate.
  std::function<void(const TraceRecord&, std::span<const double>)> on_record;
};

/// KKT-style stationarity gap. Unbounded: max grad - min grad. Bounded:
/// the same over coordinates free to move (x_i > l_i + tol for the max side,
/// x_j < u_j - tol for the min side), floored at zero; zero when a candidate
/// set is empty.
double optimality_measure(std::span<const double> grad, std::span<const double> x,
                          const ProblemSpec& spec, double tol = kFeasTol);

struct RunResult {
  std::vector<double> x;
  Trace trace;
  std::int64_t iterations = 0;
  double final_fval = 0.0;
  double final_optimality = 0.0;
};

/// Iterates rule selection + step until max_iters, stationarity at opt_tol,
/// or a blocked/zero step. Gradients are maintained incrementally for
/// quadratic objectives and recomputed every resync_every steps, when the
/// iterate is also re-projected onto the constraint. Deterministic per seed.
RunResult run(const Objective& obj, const ProblemSpec& spec, const SolverConfig& config,
              const LipschitzInfo& L, std::span<const double> x0);

struct ReferenceOptimum {
  std::vector<double> x;
  double fstar = 0.0;
  bool exact = false;  // false for the long-run bounded reference
};

/// Unbounded problems: direct KKT solve (throws for a singular system,
/// suggesting a ridge). Bounded problems: long GS-q run, 1e7 iterations or
/// optimality <= 1e-12, flagged approximate.
ReferenceOptimum reference_optimum(const LeastSquares& obj, const ProblemSpec& spec);

enum class EnvelopeMode { Equality, GSqBound };

struct EnvelopeReport {
  bool pass = false;
  double worst_margin = 0.0;  // min over records of bound - gap (negative = violated)
  std::int64_t worst_iter = 0;
};

/// Verifies f(x_k) - fstar <= rho^k (f(x_0) - fstar) (1 + 1e-6) on every
/// recorded iterate, with rho = 1 - 2 mu2 / (n L2) for Equality mode and
/// rho = 1 - mu2 / (L2 (n-1)) for GSqBound mode.
EnvelopeReport rate_envelope_check(const Trace& trace, double fstar, double mu2, double L2, int n,
                                   EnvelopeMode mode);

/// Coordinates strictly inside their bounds (exact comparisons; steps snap
/// bound hits so at-bound coordinates compare equal).
int interior_count(std::span<const double> x, const ProblemSpec& spec);

}  // namespace eqcd
