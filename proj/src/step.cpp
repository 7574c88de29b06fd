#include "eqcd/step.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "eqcd/feasible.hpp"

namespace eqcd {

double StepPolicy::resolve(const LipschitzInfo& L) const {
  switch (mode) {
    case StepMode::FixedInvL2: return 1.0 / L.L2;
    case StepMode::FixedInvL1: return 1.0 / L.L1;
    case StepMode::Explicit:
      if (!(alpha > 0.0)) throw std::invalid_argument("StepPolicy: explicit alpha must be positive");
      return alpha;
    case StepMode::LiPairwise:
      throw std::invalid_argument("StepPolicy: LiPairwise has no scalar alpha");
  }
  throw std::logic_error("StepPolicy: bad mode");
}

Direction step_equality(std::span<const double> grad, const PairChoice& pair, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("step_equality: alpha must be positive");
  const double delta = -0.5 * alpha * (grad[pair.i] - grad[pair.j]);
  if (delta == 0.0) return {};
  return Direction{{pair.i, pair.j},
                   {delta, -delta},
                   {BoundaryHit::Interior, BoundaryHit::Interior}};
}

namespace {

Direction truncated_pair_step(double magnitude, const PairChoice& pair, std::span<const double> x,
                              const ProblemSpec& spec) {
  const double slack_i = x[pair.i] - spec.lower[pair.i];  // +inf when unbounded below
  const double slack_j = spec.upper[pair.j] - x[pair.j];
  if (slack_i < 0.0 || slack_j < 0.0)
    throw std::runtime_error("step: negative slack, iterate is infeasible");
  double m = magnitude;
  if (std::isfinite(slack_i) && slack_i < m) m = slack_i;
  if (std::isfinite(slack_j) && slack_j < m) m = slack_j;
  if (m <= 0.0) return {};
  return Direction{{pair.i, pair.j},
                   {-m, m},
                   {m == slack_i ? BoundaryHit::AtLower : BoundaryHit::Interior,
                    m == slack_j ? BoundaryHit::AtUpper : BoundaryHit::Interior}};
}

}  // namespace

Direction step_bound(std::span<const double> grad, const PairChoice& pair,
                     std::span<const double> x, const ProblemSpec& spec, double alpha) {
  const double gdiff = grad[pair.i] - grad[pair.j];
  if (gdiff < 0.0) throw std::invalid_argument("step_bound: pair must satisfy grad_i >= grad_j");
  return truncated_pair_step(0.5 * alpha * gdiff, pair, x, spec);
}

Direction step_li(std::span<const double> grad, const PairChoice& pair,
                  std::span<const double> Li) {
  const double denom = Li[pair.i] + Li[pair.j];
  if (!(denom > 0.0)) throw std::invalid_argument("step_li: L_i + L_j must be positive");
  const double delta = -(grad[pair.i] - grad[pair.j]) / denom;
  if (delta == 0.0) return {};
  return Direction{{pair.i, pair.j},
                   {delta, -delta},
                   {BoundaryHit::Interior, BoundaryHit::Interior}};
}

Direction step_li_bound(std::span<const double> grad, const PairChoice& pair,
                        std::span<const double> x, const ProblemSpec& spec,
                        std::span<const double> Li) {
  const double gdiff = grad[pair.i] - grad[pair.j];
  if (gdiff < 0.0) throw std::invalid_argument("step_li_bound: pair must satisfy grad_i >= grad_j");
  const double denom = Li[pair.i] + Li[pair.j];
  if (!(denom > 0.0)) throw std::invalid_argument("step_li_bound: L_i + L_j must be positive");
  return truncated_pair_step(gdiff / denom, pair, x, spec);
}

Direction gs1_pair_equality(std::span<const double> grad, double alpha) {
  const PairChoice pair = select_greedy(grad);
  const double delta = -0.25 * alpha * (grad[pair.i] - grad[pair.j]);
  if (delta == 0.0) return {};
  return Direction{{pair.i, pair.j},
                   {delta, -delta},
                   {BoundaryHit::Interior, BoundaryHit::Interior}};
}

Direction gs1_direction(std::span<const double> grad, std::span<const double> x,
                        const ProblemSpec& spec, double alpha, int* advances) {
  if (!(alpha > 0.0)) throw std::invalid_argument("gs1_direction: alpha must be positive");
  if (!check_feasible(x, spec)) throw std::runtime_error("gs1_direction: x is infeasible");
  const int n = spec.n;
  if (advances) *advances = 0;

  // Coordinates in descending gradient order; the front is the candidate set
  // for decreases (limited by x-l), the back for increases (limited by u-x).
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int p, int q) {
    if (grad[p] != grad[q]) return grad[p] > grad[q];
    return p < q;
  });

  auto slack_lo = [&](int pos) {
    const int c = order[static_cast<size_t>(pos)];
    return spec.lower[c] == -kInf ? kInf : std::max(0.0, x[c] - spec.lower[c]);
  };
  auto slack_hi = [&](int pos) {
    const int c = order[static_cast<size_t>(pos)];
    return spec.upper[c] == kInf ? kInf : std::max(0.0, spec.upper[c] - x[c]);
  };

  // Find the optimal one-sided mass P: the model as a function of P is convex
  // piecewise quadratic, stationary at (alpha/4)(grad_a - grad_b) while the
  // marginal pair is (a, b). Each pointer advance permanently consumes one
  // coordinate's slack, so the loop runs at most n times.
  int a = 0, b = n - 1;
  double omega = 0.0, kappa = 0.0;  // slack consumed before the marginal coords
  double mass = 0.0;
  while (true) {
    if (a >= b) {
      mass = std::max(omega, kappa);
      break;
    }
    const double sa = slack_lo(a), tb = slack_hi(b);
    const double stationary =
        0.25 * alpha * (grad[order[static_cast<size_t>(a)]] - grad[order[static_cast<size_t>(b)]]);
    const double stage_lo = std::max(omega, kappa);
    const double stage_hi = std::min(omega + sa, kappa + tb);
    if (stationary <= stage_lo) {
      mass = stage_lo;
      break;
    }
    if (stationary <= stage_hi) {
      mass = stationary;
      break;
    }
    if (advances) ++(*advances);
    if (omega + sa <= kappa + tb) {
      omega += sa;
      ++a;
    } else {
      kappa += tb;
      --b;
    }
  }
  if (!(mass > 0.0)) return {};

  // Assemble d from the scan state: coordinates before a / after b moved
  // fully onto their bound, the marginal coordinates take the remainder.
  Direction d;
  auto push = [&](int pos, double value, BoundaryHit hit) {
    if (value == 0.0) return;
    d.support.push_back(order[static_cast<size_t>(pos)]);
    d.values.push_back(value);
    d.boundary_hits.push_back(hit);
  };
  for (int p = 0; p < a; ++p) push(p, -slack_lo(p), BoundaryHit::AtLower);
  if (a <= b && mass > omega) {
    const double take = mass - omega;
    push(a, -take, take == slack_lo(a) ? BoundaryHit::AtLower : BoundaryHit::Interior);
  }
  if (a <= b && mass > kappa) {
    const double take = mass - kappa;
    push(b, take, take == slack_hi(b) ? BoundaryHit::AtUpper : BoundaryHit::Interior);
  }
  for (int q = b + 1; q < n; ++q) push(q, slack_hi(q), BoundaryHit::AtUpper);
  return d;
}

double steepest_value_1norm(std::span<const double> grad, const Direction& d, double alpha) {
  double lin = 0.0, nrm1 = 0.0;
  for (size_t t = 0; t < d.support.size(); ++t) {
    lin += grad[d.support[t]] * d.values[t];
    nrm1 += std::abs(d.values[t]);
  }
  return lin + nrm1 * nrm1 / (2.0 * alpha);
}

std::vector<std::vector<double>> conformal_decompose(std::span<const double> d, double tol) {
  const int n = static_cast<int>(d.size());
  double sum = 0.0, scale = 0.0;
  for (double v : d) {
    sum += v;
    scale += std::abs(v);
  }
  if (std::abs(sum) > tol * std::max(1.0, scale))
    throw std::invalid_argument("conformal_decompose: input does not sum to zero");

  std::vector<double> rest(d.begin(), d.end());
  std::vector<int> pos, neg;
  for (int i = 0; i < n; ++i) {
    if (rest[static_cast<size_t>(i)] > 0.0) pos.push_back(i);
    else if (rest[static_cast<size_t>(i)] < 0.0) neg.push_back(i);
  }

  std::vector<std::vector<double>> parts;
  size_t p = 0, q = 0;
  while (p < pos.size() && q < neg.size()) {
    const int i = pos[p], j = neg[q];
    const double t = std::min(rest[static_cast<size_t>(i)], -rest[static_cast<size_t>(j)]);
    std::vector<double> comp(static_cast<size_t>(n), 0.0);
    comp[static_cast<size_t>(i)] = t;
    comp[static_cast<size_t>(j)] = -t;
    parts.push_back(std::move(comp));
    rest[static_cast<size_t>(i)] -= t;
    rest[static_cast<size_t>(j)] += t;
    if (rest[static_cast<size_t>(i)] == 0.0) ++p;
    if (rest[static_cast<size_t>(j)] == 0.0) ++q;
  }
  return parts;
}

}  // namespace eqcd
