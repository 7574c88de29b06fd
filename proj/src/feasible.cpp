#include "eqcd/feasible.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eqcd {

void ProblemSpec::validate() const {
  if (n <= 0) throw std::invalid_argument("ProblemSpec: n must be positive");
  if (lower.size() != static_cast<size_t>(n) || upper.size() != static_cast<size_t>(n))
    throw std::invalid_argument("ProblemSpec: bound vectors must have length n");
  if (weights) {
    if (weights->size() != static_cast<size_t>(n))
      throw std::invalid_argument("ProblemSpec: weights must have length n");
    for (double a : *weights)
      if (!(a > 0.0) || !std::isfinite(a))
        throw std::invalid_argument("ProblemSpec: weights must be strictly positive");
  }
  double lo_mass = 0.0, hi_mass = 0.0;
  for (int i = 0; i < n; ++i) {
    if (lower[i] > upper[i]) throw std::invalid_argument("ProblemSpec: lower > upper");
    const double a = weight(i);
    lo_mass += (lower[i] == -kInf) ? -kInf : a * lower[i];
    hi_mass += (upper[i] == kInf) ? kInf : a * upper[i];
  }
  if (lo_mass > gamma || hi_mass < gamma)
    throw std::invalid_argument("ProblemSpec: feasible set is empty");
}

bool check_feasible(std::span<const double> x, const ProblemSpec& spec, double tol) {
  if (x.size() != static_cast<size_t>(spec.n))
    throw std::invalid_argument("check_feasible: dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < spec.n; ++i) {
    if (x[i] < spec.lower[i] - tol || x[i] > spec.upper[i] + tol) return false;
    s += spec.weight(i) * x[i];
  }
  return std::abs(s - spec.gamma) <= tol;
}

namespace {

double weighted_sum(std::span<const double> x, const ProblemSpec& spec) {
  double s = 0.0;
  for (int i = 0; i < spec.n; ++i) s += spec.weight(i) * x[i];
  return s;
}

// sum_i w_i clamp(x0_i + nu*w_i, l_i, u_i), monotone nondecreasing in nu.
double clamped_mass(std::span<const double> x0, const ProblemSpec& spec, double nu) {
  double s = 0.0;
  for (int i = 0; i < spec.n; ++i) {
    const double a = spec.weight(i);
    s += a * std::clamp(x0[i] + nu * a, spec.lower[i], spec.upper[i]);
  }
  return s;
}

}  // namespace

std::vector<double> project_to_feasible(std::span<const double> x0, const ProblemSpec& spec) {
  spec.validate();
  if (x0.size() != static_cast<size_t>(spec.n))
    throw std::invalid_argument("project_to_feasible: dimension mismatch");
  std::vector<double> x(x0.begin(), x0.end());

  if (!spec.has_bounds()) {
    double wsq = 0.0;
    for (int i = 0; i < spec.n; ++i) wsq += spec.weight(i) * spec.weight(i);
    const double nu = (spec.gamma - weighted_sum(x0, spec)) / wsq;
    for (int i = 0; i < spec.n; ++i) x[i] += nu * spec.weight(i);
    return x;
  }

  // Bracket the multiplier, then bisect sum_i w_i clamp(x0_i + nu w_i) = gamma.
  double lo = -1.0, hi = 1.0;
  while (clamped_mass(x0, spec, lo) > spec.gamma) {
    lo *= 2.0;
    if (lo < -1e18) throw std::runtime_error("project_to_feasible: cannot bracket multiplier");
  }
  while (clamped_mass(x0, spec, hi) < spec.gamma) {
    hi *= 2.0;
    if (hi > 1e18) throw std::runtime_error("project_to_feasible: cannot bracket multiplier");
  }
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (clamped_mass(x0, spec, mid) < spec.gamma ? lo : hi) = mid;
  }
  const double nu = 0.5 * (lo + hi);
  for (int i = 0; i < spec.n; ++i)
    x[i] = std::clamp(x0[i] + nu * spec.weight(i), spec.lower[i], spec.upper[i]);

  // Newton polish: spread the residual over coordinates strictly inside the box.
  const double resid = spec.gamma - weighted_sum(x, spec);
  double free_wsq = 0.0;
  for (int i = 0; i < spec.n; ++i)
    if (x[i] > spec.lower[i] && x[i] < spec.upper[i])
      free_wsq += spec.weight(i) * spec.weight(i);
  if (free_wsq > 0.0) {
    for (int i = 0; i < spec.n; ++i)
      if (x[i] > spec.lower[i] && x[i] < spec.upper[i])
        x[i] = std::clamp(x[i] + resid * spec.weight(i) / free_wsq, spec.lower[i], spec.upper[i]);
  }
  if (!check_feasible(x, spec, 1e-10))
    throw std::runtime_error("project_to_feasible: projection failed to converge");
  return x;
}

void apply_direction(std::span<double> x, const Direction& d, const ProblemSpec& spec) {
  for (size_t t = 0; t < d.support.size(); ++t) {
    const int i = d.support[t];
    switch (d.boundary_hits[t]) {
      case BoundaryHit::AtLower: x[i] = spec.lower[i]; break;
      case BoundaryHit::AtUpper: x[i] = spec.upper[i]; break;
      case BoundaryHit::Interior: x[i] += d.values[t]; break;
    }
  }
}

}  // namespace eqcd
