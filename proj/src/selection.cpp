#include "eqcd/selection.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "eqcd/kernels.hpp"

namespace eqcd {

const char* to_string(RuleId rule) {
  switch (rule) {
    case RuleId::RandomUniform: return "random";
    case RuleId::LiProportional: return "li-random";
    case RuleId::Greedy: return "greedy";
    case RuleId::GSs: return "gs-s";
    case RuleId::GSqBound: return "gs-q";
    case RuleId::GSL: return "gsl";
    case RuleId::GSL1: return "gsl-1";
    case RuleId::Ratio: return "ratio";
    case RuleId::GS1: return "gs-1";
  }
  return "?";
}

RuleId rule_from_string(const std::string& name) {
  if (name == "random") return RuleId::RandomUniform;
  if (name == "li-random") return RuleId::LiProportional;
  if (name == "greedy") return RuleId::Greedy;
  if (name == "gs-s") return RuleId::GSs;
  if (name == "gs-q") return RuleId::GSqBound;
  if (name == "gsl") return RuleId::GSL;
  if (name == "gsl-1") return RuleId::GSL1;
  if (name == "ratio") return RuleId::Ratio;
  if (name == "gs-1") return RuleId::GS1;
  throw std::invalid_argument("unknown rule: " + name);
}

PairChoice select_random_pair(int n, std::mt19937_64& rng) {
  if (n < 2) throw std::invalid_argument("select_random_pair: need n >= 2");
  std::uniform_int_distribution<int> first(0, n - 1);
  std::uniform_int_distribution<int> second(0, n - 2);
  const int i = first(rng);
  int j = second(rng);
  if (j >= i) ++j;
  return {i, j, 0.0};
}

PairChoice select_li_proportional(std::span<const double> Li, std::mt19937_64& rng) {
  const int n = static_cast<int>(Li.size());
  if (n < 2) throw std::invalid_argument("select_li_proportional: need n >= 2");
  double total = 0.0;
  for (double v : Li) {
    if (!(v > 0.0)) throw std::invalid_argument("select_li_proportional: Li must be positive");
    total += v;
  }
  auto draw = [&](double mass, int skip) {
    std::uniform_real_distribution<double> u(0.0, mass);
    double r = u(rng);
    int last = -1;
    for (int k = 0; k < n; ++k) {
      if (k == skip) continue;
      last = k;
      r -= Li[k];
      if (r < 0.0) return k;
    }
    return last;  // rounding pushed r past the last bucket
  };
  const int i = draw(total, -1);
  const int j = draw(total - Li[i], i);
  return {i, j, 0.0};
}

namespace {

// argmin of v over indices != skip (lowest-index ties).
int argmin_excluding(std::span<const double> v, int skip) {
  int best = -1;
  for (int k = 0; k < static_cast<int>(v.size()); ++k) {
    if (k == skip) continue;
    if (best < 0 || v[k] < v[best]) best = k;
  }
  return best;
}

}  // namespace

PairChoice select_greedy(std::span<const double> grad) {
  if (grad.size() < 2) throw std::invalid_argument("select_greedy: need n >= 2");
  const auto mm = kernels::argminmax(grad);
  int i = mm.imax, j = mm.imin;
  if (i == j) j = argmin_excluding(grad, i);
  return {i, j, grad[i] - grad[j]};
}

std::optional<PairChoice> select_gs_s(std::span<const double> grad, std::span<const double> x,
                                      const ProblemSpec& spec, double tol) {
  const int n = spec.n;
  std::vector<unsigned char> can_max(static_cast<size_t>(n)), can_min(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    can_max[static_cast<size_t>(k)] = x[k] > spec.lower[k] + tol;
    can_min[static_cast<size_t>(k)] = x[k] < spec.upper[k] - tol;
  }
  const auto mm = kernels::argminmax_masked(grad, can_max, can_min);
  if (mm.imax < 0 || mm.imin < 0) return std::nullopt;
  int i = mm.imax, j = mm.imin;
  if (i == j) {
    j = -1;
    for (int k = 0; k < n; ++k) {
      if (k == i || !can_min[static_cast<size_t>(k)]) continue;
      if (j < 0 || grad[k] < grad[j]) j = k;
    }
    if (j < 0) return std::nullopt;
  }
  return PairChoice{i, j, grad[i] - grad[j]};
}

PairChoice select_gs_q_bound(std::span<const double> grad, std::span<const double> x,
                             const ProblemSpec& spec, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("select_gs_q_bound: alpha must be positive");
  const auto best = kernels::best_pair_gsq_bound(grad, x, spec.lower, spec.upper, alpha);
  return {best.i, best.j, best.score};
}

PairChoice select_gsl(std::span<const double> grad, std::span<const double> Li) {
  const auto best = kernels::best_pair_gsl(grad, Li);
  return {best.i, best.j, best.score};
}

PairChoice select_gsl_1(std::span<const double> grad, std::span<const double> Li) {
  std::vector<double> s(Li.size());
  for (size_t k = 0; k < Li.size(); ++k) s[k] = std::sqrt(Li[k]);
  const auto best = kernels::best_pair_gsl1(grad, s);
  return {best.i, best.j, best.score};
}

PairChoice select_ratio(std::span<const double> grad, std::span<const double> Li) {
  const int n = static_cast<int>(grad.size());
  if (n < 2) throw std::invalid_argument("select_ratio: need n >= 2");
  double mu = 0.0;
  for (double v : grad) mu += v;
  mu /= n;
  std::vector<double> inv(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) inv[static_cast<size_t>(k)] = 1.0 / std::sqrt(Li[k]);
  const auto mm = kernels::argminmax_shifted_scaled(grad, inv, mu);
  int i = mm.imax, j = mm.imin;
  if (i == j) j = argmin_excluding(grad, i);
  return {i, j, mm.vmax - mm.vmin};
}

}  // namespace eqcd
