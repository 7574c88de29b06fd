#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "eqcd/solver.hpp"

namespace eqcd {

struct ExperimentConfig {
  int n = 200;
  int m = 200;
  std::int64_t iters = 5000;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3};
  std::int64_t trace_every = 10;
  double ridge = 0.0;
};

struct CurveResult {
  RuleId rule = RuleId::Greedy;
  std::uint64_t seed = 0;
  bool scaled = false;
  Trace trace;  // gap column filled against fstar
  double fstar = 0.0;
  bool fstar_exact = true;
  double final_gap = 0.0;
  std::vector<int> interior;                // per record; bounded experiment only
  std::vector<std::int64_t> support_hist;   // index = support size; gs-1 only
};

/// Random-vs-greedy comparison on the free synthetic least-squares problem
/// (gamma = 0): rules random, greedy, li-random, gsl, ratio, gsl-1, all with
/// the pairwise 1/(L_i+L_j) update, one curve per rule per seed.
std::vector<CurveResult> run_figure1(const ExperimentConfig& cfg, bool scaled);

/// Bounded variant (x in [-1, 1]): gs-s, gs-q, gs-1, tracing every iteration
/// plus interior-variable counts and the gs-1 support-size histogram.
std::vector<CurveResult> run_figure2(const ExperimentConfig& cfg);

/// Writes one trace CSV per curve into outdir (rule_seed[_scaled].csv), the
/// gs-1 support histograms, and a meta.json describing the run parameters.
void write_curves(const std::string& outdir, const std::string& prefix,
                  const std::vector<CurveResult>& curves, const ExperimentConfig& cfg);

/// Runs fn(0..count-1), possibly concurrently; EQCD_THREADS caps the worker
/// count. Workers force serial kernels so solver runs do not nest parallism.
void parallel_runs(int count, const std::function<void(int)>& fn);

/// Smallest eigenvalue of the gram matrix (the mu_2 constant for rate tests).
double min_eigenvalue_gram(const LeastSquares& q);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Oracle battery behind the verify command. Suites: pairs, steepest, rates,
/// decompose, lipschitz, or all.
std::vector<CheckResult> run_verification(const std::string& suite);

}  // namespace eqcd
