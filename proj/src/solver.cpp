#include "eqcd/solver.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "eqcd/feasible.hpp"
#include "eqcd/kernels.hpp"

namespace eqcd {

double optimality_measure(std::span<const double> grad, std::span<const double> x,
                          const ProblemSpec& spec, double tol) {
  if (!spec.has_bounds()) {
    const auto mm = kernels::argminmax(grad);
    return mm.vmax - mm.vmin;
  }
  std::vector<unsigned char> can_max(static_cast<size_t>(spec.n)),
      can_min(static_cast<size_t>(spec.n));
  for (int k = 0; k < spec.n; ++k) {
    can_max[static_cast<size_t>(k)] = x[k] > spec.lower[k] + tol;
    can_min[static_cast<size_t>(k)] = x[k] < spec.upper[k] - tol;
  }
  const auto mm = kernels::argminmax_masked(grad, can_max, can_min);
  if (mm.imax < 0 || mm.imin < 0) return 0.0;
  return std::max(0.0, mm.vmax - mm.vmin);
}

int interior_count(std::span<const double> x, const ProblemSpec& spec) {
  int c = 0;
  for (int i = 0; i < spec.n; ++i) c += (x[i] > spec.lower[i] && x[i] < spec.upper[i]);
  return c;
}

namespace {

void validate_config(const SolverConfig& config) {
  if (config.max_iters < 1) throw std::invalid_argument("run: max_iters must be >= 1");
  if (config.opt_tol < 0.0) throw std::invalid_argument("run: opt_tol must be >= 0");
  if (config.rule == RuleId::GS1) {
    if (config.policy.mode != StepMode::FixedInvL1 && config.policy.mode != StepMode::Explicit)
      throw std::invalid_argument("run: gs-1 requires the 1/L1 or an explicit step size");
  }
  if (config.policy.mode == StepMode::LiPairwise && config.rule == RuleId::GSqBound)
    throw std::invalid_argument("run: gs-q needs a scalar step size, not the pairwise policy");
}

struct GradState {
  // Incremental maintenance for quadratics: grad += sum_t v_t H[:,s_t] and
  // f += grad_old' d + 1/2 d' H d after each sparse step.
  const Objective* obj;
  bool quadratic;

  void refresh(std::span<const double> x, std::vector<double>& grad, double& fval) const {
    obj->grad(x, grad);
    fval = obj->eval(x);
  }

  void advance(const Direction& d, std::vector<double>& grad, double& fval) const {
    double lin = 0.0;
    for (size_t t = 0; t < d.support.size(); ++t) lin += grad[d.support[t]] * d.values[t];
    double quad = 0.0;
    for (size_t t = 0; t < d.support.size(); ++t)
      for (size_t s = 0; s < d.support.size(); ++s)
        quad += d.values[t] * d.values[s] * obj->hessian_entry(d.support[t], d.support[s]);
    fval += lin + 0.5 * quad;
    if (d.support.size() == 2 && d.values[0] == -d.values[1]) {
      kernels::axpy_pair(grad, obj->hessian_col(d.support[0]), obj->hessian_col(d.support[1]),
                         d.values[0]);
    } else {
      std::vector<std::span<const double>> cols(d.support.size());
      for (size_t t = 0; t < d.support.size(); ++t) cols[t] = obj->hessian_col(d.support[t]);
      kernels::add_scaled_cols(grad, cols, d.values);
    }
  }
};

}  // namespace

RunResult run(const Objective& obj, const ProblemSpec& spec, const SolverConfig& config,
              const LipschitzInfo& L, std::span<const double> x0) {
  spec.validate();
  validate_config(config);
  if (!check_feasible(x0, spec)) throw std::invalid_argument("run: x0 is infeasible");
  const int n = spec.n;
  const bool pairwise = config.policy.mode == StepMode::LiPairwise;
  const double alpha = pairwise ? 0.0 : config.policy.resolve(L);

  Iterate it;
  it.x.assign(x0.begin(), x0.end());
  it.grad.resize(static_cast<size_t>(n));
  GradState gs{&obj, obj.is_quadratic()};
  gs.refresh(it.x, it.grad, it.fval);

  std::mt19937_64 rng(config.seed);
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed_ns = [&] {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() -
                                                                t0)
        .count();
  };

  RunResult out;
  double measure = optimality_measure(it.grad, it.x, spec);
  auto emit = [&](std::int64_t iter, const Direction* d, const PairChoice* pc) {
    TraceRecord r;
    r.iter = iter;
    r.fval = it.fval;
    r.optimality = measure;
    r.rule = to_string(config.rule);
    r.support_size = d ? d->support_size() : 0;
    if (pc) {
      r.pair = std::make_pair(pc->i, pc->j);
      r.delta = d && !d->empty() ? d->values[0] : 0.0;
    }
    r.elapsed_ns = elapsed_ns();
    if (config.on_record) config.on_record(r, it.x);
    out.trace.push_back(std::move(r));
  };
  emit(0, nullptr, nullptr);

  std::int64_t k = 0;
  std::int64_t last_emitted = 0;
  while (k < config.max_iters && measure > config.opt_tol) {
    Direction d;
    PairChoice pc;
    bool have_pair = true;
    switch (config.rule) {
      case RuleId::RandomUniform:
      case RuleId::LiProportional: {
        pc = config.rule == RuleId::RandomUniform ? select_random_pair(n, rng)
                                                  : select_li_proportional(L.Li, rng);
        if (it.grad[pc.i] < it.grad[pc.j]) std::swap(pc.i, pc.j);
        break;
      }
      case RuleId::Greedy: pc = select_greedy(it.grad); break;
      case RuleId::GSs: {
        auto choice = select_gs_s(it.grad, it.x, spec);
        if (!choice) { have_pair = false; break; }  // blocked: converged for this rule
        pc = *choice;
        break;
      }
      case RuleId::GSqBound: pc = select_gs_q_bound(it.grad, it.x, spec, alpha); break;
      case RuleId::GSL: pc = select_gsl(it.grad, L.Li); break;
      case RuleId::GSL1: pc = select_gsl_1(it.grad, L.Li); break;
      case RuleId::Ratio: pc = select_ratio(it.grad, L.Li); break;
      case RuleId::GS1:
        d = gs1_direction(it.grad, it.x, spec, alpha);
        have_pair = false;
        break;
    }
    if (config.rule != RuleId::GS1) {
      if (!have_pair) break;
      d = pairwise ? step_li_bound(it.grad, pc, it.x, spec, L.Li)
                   : step_bound(it.grad, pc, it.x, spec, alpha);
    }
    if (d.empty()) break;

    const double fdelta_lin = [&] {
      double s = 0.0;
      for (size_t t = 0; t < d.support.size(); ++t) s += it.grad[d.support[t]] * d.values[t];
      return s;
    }();
    apply_direction(it.x, d, spec);
    if (gs.quadratic) {
      gs.advance(d, it.grad, it.fval);
    } else {
      (void)fdelta_lin;
      gs.refresh(it.x, it.grad, it.fval);
    }
    ++k;
    it.k = k;

    if (config.resync_every > 0 && k % config.resync_every == 0) {
      it.x = project_to_feasible(it.x, spec);
      gs.refresh(it.x, it.grad, it.fval);
    }
    measure = optimality_measure(it.grad, it.x, spec);
    if (k % config.trace_every == 0) {
      emit(k, &d, have_pair ? &pc : nullptr);
      last_emitted = k;
    }
  }
  if (last_emitted != k) emit(k, nullptr, nullptr);

  out.x = std::move(it.x);
  out.iterations = k;
  out.final_fval = it.fval;
  out.final_optimality = measure;
  return out;
}

ReferenceOptimum reference_optimum(const LeastSquares& obj, const ProblemSpec& spec) {
  spec.validate();
  const int n = obj.dimension();
  if (spec.n != n) throw std::invalid_argument("reference_optimum: dimension mismatch");

  if (!spec.has_bounds()) {
    Eigen::MatrixXd K(n + 1, n + 1);
    K.setZero();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) K(i, j) = obj.hessian_entry(i, j);
    for (int i = 0; i < n; ++i) {
      K(i, n) = spec.weight(i);
      K(n, i) = spec.weight(i);
    }
    Eigen::VectorXd rhs(n + 1);
    for (int i = 0; i < n; ++i) rhs(i) = obj.atb()[i];
    rhs(n) = spec.gamma;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(K);
    Eigen::VectorXd sol = lu.solve(rhs);
    const double resid = (K * sol - rhs).norm();
    if (!sol.allFinite() || resid > 1e-8 * std::max(1.0, rhs.norm()))
      throw std::runtime_error(
          "reference_optimum: singular KKT system; add a ridge term to make the "
          "objective strongly convex on the constraint subspace");
    ReferenceOptimum ref;
    ref.x.assign(sol.data(), sol.data() + n);
    ref.fstar = obj.eval(ref.x);
    ref.exact = true;
    return ref;
  }

  SolverConfig cfg;
  cfg.rule = RuleId::GSqBound;
  cfg.policy = StepPolicy::fixed_inv_l2();
  cfg.max_iters = 10'000'000;
  cfg.opt_tol = 1e-12;
  cfg.trace_every = cfg.max_iters + 1;
  const auto L = LipschitzInfo::from_L2(compute_L2_exact(obj), compute_Li(obj));
  std::vector<double> zeros(static_cast<size_t>(n), 0.0);
  const auto x0 = project_to_feasible(zeros, spec);
  auto res = run(obj, spec, cfg, L, x0);
  ReferenceOptimum ref;
  ref.fstar = obj.eval(res.x);
  ref.x = std::move(res.x);
  ref.exact = false;
  return ref;
}

EnvelopeReport rate_envelope_check(const Trace& trace, double fstar, double mu2, double L2, int n,
                                   EnvelopeMode mode) {
  if (!(mu2 > 0.0)) throw std::invalid_argument("rate_envelope_check: mu2 must be positive");
  if (trace.empty() || trace.front().iter != 0)
    throw std::invalid_argument("rate_envelope_check: trace must start at iteration 0");
  const double rho = mode == EnvelopeMode::Equality ? 1.0 - 2.0 * mu2 / (n * L2)
                                                    : 1.0 - mu2 / (L2 * (n - 1));
  const double gap0 = trace.front().fval - fstar;
  EnvelopeReport rep;
  rep.pass = true;
  rep.worst_margin = kInf;
  for (const TraceRecord& r : trace) {
    const double bound = std::pow(rho, static_cast<double>(r.iter)) * gap0 * (1.0 + 1e-6);
    const double margin = bound - (r.fval - fstar);
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_iter = r.iter;
    }
    if (margin < 0.0) rep.pass = false;
  }
  return rep;
}

}  // namespace eqcd
