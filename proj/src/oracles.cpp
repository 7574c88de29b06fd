#include "eqcd/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eqcd::oracle {

namespace {

double model_value_pair(std::span<const double> grad, int i, int j, double di, double dj,
                        double alpha) {
  return grad[i] * di + grad[j] * dj + (di * di + dj * dj) / (2.0 * alpha);
}

}  // namespace

PairChoice exhaustive_pair(std::span<const double> grad, std::span<const double> x,
                           const ProblemSpec& spec, double alpha, PairModel model,
                           std::span<const double> Li) {
  const int n = static_cast<int>(grad.size());
  if (n < 2) throw std::invalid_argument("exhaustive_pair: need n >= 2");
  if ((model == PairModel::GSL || model == PairModel::GSL1) && Li.size() != grad.size())
    throw std::invalid_argument("exhaustive_pair: Li required for weighted models");

  PairChoice best;
  bool minimize = model == PairModel::GSqEquality || model == PairModel::GSqBound;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double score = 0.0;
      switch (model) {
        case PairModel::AbsDiff:
          score = grad[i] - grad[j];
          break;
        case PairModel::GSqEquality: {
          const double m = 0.5 * alpha * (grad[i] - grad[j]);
          score = model_value_pair(grad, i, j, -m, m, alpha);
          break;
        }
        case PairModel::GSqBound: {
          if (grad[i] < grad[j]) continue;
          double m = 0.5 * alpha * (grad[i] - grad[j]);
          const double si = x[i] - spec.lower[i];
          const double sj = spec.upper[j] - x[j];
          if (std::isfinite(si)) m = std::min(m, si);
          if (std::isfinite(sj)) m = std::min(m, sj);
          score = model_value_pair(grad, i, j, -m, m, alpha);
          break;
        }
        case PairModel::GSL:
          score = (grad[i] - grad[j]) / std::sqrt(Li[i] + Li[j]);
          break;
        case PairModel::GSL1:
          score = (grad[i] - grad[j]) / (std::sqrt(Li[i]) + std::sqrt(Li[j]));
          break;
      }
      const bool better = best.i < 0 || (minimize ? score < best.score : score > best.score);
      if (better) best = {i, j, score};
    }
  return best;
}

namespace {

struct Box {
  std::vector<double> lo, hi;  // per-coordinate feasible range for d
};

double weighted_norm_sq_value(std::span<const double> grad, std::span<const double> d,
                              std::span<const double> w, double alpha) {
  double lin = 0.0, nrm = 0.0;
  for (size_t k = 0; k < d.size(); ++k) {
    lin += grad[k] * d[k];
    nrm += w[k] * std::abs(d[k]);
  }
  return lin + nrm * nrm / (2.0 * alpha);
}

}  // namespace

namespace {

struct GridSearch {
  std::span<const double> grad;
  std::span<const double> w;
  double alpha;
  Box box;
  int n, nf, last;
  double full_width;

  double value(const std::vector<double>& d) const {
    return weighted_norm_sq_value(grad, d, w, alpha);
  }

  bool closes(std::vector<double>& d) const {
    double s = 0.0;
    for (int k = 0; k < nf; ++k) s += d[static_cast<size_t>(k)];
    d[static_cast<size_t>(last)] = -s;
    return -s >= box.lo[static_cast<size_t>(last)] - 1e-15 &&
           -s <= box.hi[static_cast<size_t>(last)] + 1e-15;
  }

  // Evaluate a kPts^nf grid over [center-half, center+half] (clipped to the
  // box), updating the beam of best points.
  template <typename Fn>
  void sweep(const std::vector<double>& center, const std::vector<double>& half, int pts,
             Fn&& visit) const {
    std::vector<int> idx(static_cast<size_t>(nf), 0);
    std::vector<double> d(static_cast<size_t>(n), 0.0);
    while (true) {
      for (int k = 0; k < nf; ++k) {
        const double lo = std::max(box.lo[static_cast<size_t>(k)],
                                   center[static_cast<size_t>(k)] - half[static_cast<size_t>(k)]);
        const double hi = std::min(box.hi[static_cast<size_t>(k)],
                                   center[static_cast<size_t>(k)] + half[static_cast<size_t>(k)]);
        d[static_cast<size_t>(k)] = lo + (hi - lo) * idx[static_cast<size_t>(k)] / (pts - 1);
      }
      if (closes(d)) visit(d, value(d));
      int k = 0;
      while (k < nf && ++idx[static_cast<size_t>(k)] == pts) {
        idx[static_cast<size_t>(k)] = 0;
        ++k;
      }
      if (k == nf) break;
    }
  }

  // Shrink cascade from a start point down to cells of 1e-3 of the box, then
  // golden-section polish per free coordinate to 1e-7.
  void refine(std::vector<double>& best_d, double& best_v) const {
    constexpr int kPts = 13;
    std::vector<double> center(best_d.begin(), best_d.begin() + nf);
    std::vector<double> half(static_cast<size_t>(nf), full_width / 8.0);
    while (true) {
      sweep(center, half, kPts, [&](const std::vector<double>& d, double v) {
        if (v < best_v) {
          best_v = v;
          best_d = d;
        }
      });
      const double cell = 2.0 * half[0] / (kPts - 1);
      if (cell <= 1e-3 * full_width) break;
      center.assign(best_d.begin(), best_d.begin() + nf);
      for (double& h : half) h = 2.5 * cell;
    }

    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int cycle = 0; cycle < 4; ++cycle) {
      for (int k = 0; k < nf; ++k) {
        double others = 0.0;
        for (int p = 0; p < nf; ++p)
          if (p != k) others += best_d[static_cast<size_t>(p)];
        const double lo = std::max(box.lo[static_cast<size_t>(k)],
                                   -others - box.hi[static_cast<size_t>(last)]);
        const double hi = std::min(box.hi[static_cast<size_t>(k)],
                                   -others - box.lo[static_cast<size_t>(last)]);
        if (lo > hi) continue;
        auto f1d = [&](double t) {
          std::vector<double> trial = best_d;
          trial[static_cast<size_t>(k)] = t;
          trial[static_cast<size_t>(last)] = -(others + t);
          return value(trial);
        };
        double a = lo, b = hi;
        double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
        double f1 = f1d(c1), f2 = f1d(c2);
        while (b - a > 1e-7 * full_width) {
          if (f1 < f2) {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - gr * (b - a);
            f1 = f1d(c1);
          } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + gr * (b - a);
            f2 = f1d(c2);
          }
        }
        const double t = 0.5 * (a + b);
        const double v = f1d(t);
        if (v < best_v) {
          best_v = v;
          best_d[static_cast<size_t>(k)] = t;
          best_d[static_cast<size_t>(last)] = -(others + t);
        }
      }
    }
  }
};

}  // namespace

SteepestResult steepest_descent_grid(std::span<const double> grad, std::span<const double> x,
                                     const ProblemSpec& spec, double alpha,
                                     std::span<const double> norm_weights) {
  const int n = spec.n;
  if (n < 2 || n > 4) throw std::invalid_argument("steepest_descent_grid: supports 2 <= n <= 4");
  std::vector<double> w(static_cast<size_t>(n), 1.0);
  if (!norm_weights.empty()) w.assign(norm_weights.begin(), norm_weights.end());

  // ||d*||_1 <= alpha * spread(grad) / min_k w_k^2, so a box of that radius
  // intersected with the bound slacks contains the optimum.
  double gmin = grad[0], gmax = grad[0];
  for (double v : grad) {
    gmin = std::min(gmin, v);
    gmax = std::max(gmax, v);
  }
  double wmin = w[0];
  for (double v : w) wmin = std::min(wmin, v);
  const double radius = alpha * (gmax - gmin) / std::max(wmin * wmin, 1e-12) + 1e-9;

  GridSearch gs;
  gs.grad = grad;
  gs.w = w;
  gs.alpha = alpha;
  gs.n = n;
  gs.nf = n - 1;
  gs.last = n - 1;
  gs.box.lo.resize(static_cast<size_t>(n));
  gs.box.hi.resize(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    gs.box.lo[static_cast<size_t>(k)] = std::max(spec.lower[k] - x[k], -radius);
    gs.box.hi[static_cast<size_t>(k)] = std::min(spec.upper[k] - x[k], radius);
  }
  gs.full_width = 0.0;
  for (int k = 0; k < gs.nf; ++k)
    gs.full_width = std::max(gs.full_width,
                             gs.box.hi[static_cast<size_t>(k)] - gs.box.lo[static_cast<size_t>(k)]);
  if (gs.full_width <= 0.0) gs.full_width = 1e-12;

  // Dense first pass keeps a small beam of starting points so an anisotropic
  // valley cannot strand the cascade in a shallow cell.
  constexpr int kBeam = 4;
  constexpr int kCoarse = 41;
  std::vector<std::pair<double, std::vector<double>>> beam;
  std::vector<double> center(static_cast<size_t>(gs.nf)), half(static_cast<size_t>(gs.nf));
  for (int k = 0; k < gs.nf; ++k) {
    center[static_cast<size_t>(k)] =
        0.5 * (gs.box.lo[static_cast<size_t>(k)] + gs.box.hi[static_cast<size_t>(k)]);
    half[static_cast<size_t>(k)] =
        0.5 * (gs.box.hi[static_cast<size_t>(k)] - gs.box.lo[static_cast<size_t>(k)]);
  }
  gs.sweep(center, half, kCoarse, [&](const std::vector<double>& d, double v) {
    if (beam.size() < kBeam) {
      beam.emplace_back(v, d);
      std::sort(beam.begin(), beam.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
    } else if (v < beam.back().first) {
      beam.back() = {v, d};
      std::sort(beam.begin(), beam.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
    }
  });

  std::vector<double> best_d(static_cast<size_t>(n), 0.0);
  double best_v = kInf;
  {  // d = 0 is a candidate whenever it is feasible
    std::vector<double> zero(static_cast<size_t>(n), 0.0);
    bool ok = true;
    for (int k = 0; k < n; ++k)
      ok = ok && gs.box.lo[static_cast<size_t>(k)] <= 0.0 && gs.box.hi[static_cast<size_t>(k)] >= 0.0;
    if (ok) {
      best_v = gs.value(zero);
      best_d = zero;
    }
  }
  for (auto& [v0, d0] : beam) {
    std::vector<double> cand_d = d0;
    double cand_v = v0;
    gs.refine(cand_d, cand_v);
    if (cand_v < best_v) {
      best_v = cand_v;
      best_d = cand_d;
    }
  }
  return {std::move(best_d), best_v};
}

SteepestResult pairwise_exchange(std::span<const double> grad, std::span<const double> x,
                                 const ProblemSpec& spec, double alpha, std::int64_t max_moves) {
  const int n = spec.n;
  std::vector<double> d(static_cast<size_t>(n), 0.0);
  double norm1 = 0.0;

  auto value_of = [&](const std::vector<double>& dd) {
    double lin = 0.0, nrm = 0.0;
    for (int k = 0; k < n; ++k) {
      lin += grad[k] * dd[static_cast<size_t>(k)];
      nrm += std::abs(dd[static_cast<size_t>(k)]);
    }
    return lin + nrm * nrm / (2.0 * alpha);
  };

  for (std::int64_t move = 0; move < max_moves; ++move) {
    double best_gain = 0.0;
    int best_i = -1, best_j = -1;
    double best_t = 0.0;
    const double cur_value = value_of(d);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        // d_i += t, d_j -= t within both coordinates' box slack.
        const double di = d[static_cast<size_t>(i)], dj = d[static_cast<size_t>(j)];
        double t_lo = std::max(spec.lower[i] - x[i] - di, dj - (spec.upper[j] - x[j]));
        double t_hi = std::min(spec.upper[i] - x[i] - di, dj - (spec.lower[j] - x[j]));
        if (!(t_lo < t_hi)) continue;
        const double base = norm1 - std::abs(di) - std::abs(dj);
        const double gdiff = grad[i] - grad[j];
        // Piecewise quadratic in t with kinks at -d_i and d_j.
        std::vector<double> cand{t_lo, t_hi};
        for (double kink : {-di, dj})
          if (kink > t_lo && kink < t_hi) cand.push_back(kink);
        for (int s1 : {-1, 1})
          for (int s2 : {-1, 1}) {
            // On a piece where |d_i+t| = s1 (d_i+t), |d_j-t| = s2 (d_j-t):
            // S(t) = base + s1 (d_i+t) + s2 (d_j-t) = A + B t.
            const double A = base + s1 * di + s2 * dj;
            const double B = s1 - s2;
            if (B == 0.0) continue;
            const double t = -(gdiff * alpha + A * B) / (B * B);
            if (t > t_lo && t < t_hi && s1 * (di + t) >= 0.0 && s2 * (dj - t) >= 0.0)
              cand.push_back(t);
          }
        for (double t : cand) {
          if (t == 0.0 || !std::isfinite(t)) continue;
          std::vector<double> trial = d;
          trial[static_cast<size_t>(i)] += t;
          trial[static_cast<size_t>(j)] -= t;
          const double gain = cur_value - value_of(trial);
          if (gain > best_gain) {
            best_gain = gain;
            best_i = i;
            best_j = j;
            best_t = t;
          }
        }
      }
    if (best_i < 0 || best_gain <= 1e-12) break;
    d[static_cast<size_t>(best_i)] += best_t;
    d[static_cast<size_t>(best_j)] -= best_t;
    norm1 = 0.0;
    for (double v : d) norm1 += std::abs(v);
  }
  return {d, value_of(d)};
}

namespace {

// Gaussian elimination with partial pivoting; kept local so the oracle does
// not share a factorization path with the solver's reference optimum.
std::vector<double> solve_dense(std::vector<double> M, std::vector<double> rhs, int n) {
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(M[static_cast<size_t>(r) * n + col]) >
          std::abs(M[static_cast<size_t>(piv) * n + col]))
        piv = r;
    if (M[static_cast<size_t>(piv) * n + col] == 0.0)
      throw std::runtime_error("kkt_equality: singular KKT system");
    if (piv != col) {
      for (int c = 0; c < n; ++c)
        std::swap(M[static_cast<size_t>(piv) * n + c], M[static_cast<size_t>(col) * n + c]);
      std::swap(rhs[static_cast<size_t>(piv)], rhs[static_cast<size_t>(col)]);
    }
    const double diag = M[static_cast<size_t>(col) * n + col];
    for (int r = col + 1; r < n; ++r) {
      const double f = M[static_cast<size_t>(r) * n + col] / diag;
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c)
        M[static_cast<size_t>(r) * n + c] -= f * M[static_cast<size_t>(col) * n + c];
      rhs[static_cast<size_t>(r)] -= f * rhs[static_cast<size_t>(col)];
    }
  }
  std::vector<double> sol(static_cast<size_t>(n));
  for (int r = n - 1; r >= 0; --r) {
    double s = rhs[static_cast<size_t>(r)];
    for (int c = r + 1; c < n; ++c) s -= M[static_cast<size_t>(r) * n + c] * sol[static_cast<size_t>(c)];
    sol[static_cast<size_t>(r)] = s / M[static_cast<size_t>(r) * n + r];
  }
  return sol;
}

}  // namespace

std::vector<double> kkt_equality_weighted(std::span<const double> H, std::span<const double> g,
                                          std::span<const double> a, double gamma) {
  const int n = static_cast<int>(g.size());
  if (H.size() != static_cast<size_t>(n) * n || a.size() != static_cast<size_t>(n))
    throw std::invalid_argument("kkt_equality: size mismatch");
  const int m = n + 1;
  std::vector<double> K(static_cast<size_t>(m) * m, 0.0);
  std::vector<double> rhs(static_cast<size_t>(m), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      K[static_cast<size_t>(i) * m + j] = H[static_cast<size_t>(i) * n + j];
    K[static_cast<size_t>(i) * m + n] = a[i];
    K[static_cast<size_t>(n) * m + i] = a[i];
    rhs[static_cast<size_t>(i)] = g[i];
  }
  rhs[static_cast<size_t>(n)] = gamma;

  const auto sol = solve_dense(K, rhs, m);
  double resid = 0.0, scale = 0.0;
  for (int r = 0; r < m; ++r) {
    double s = -rhs[static_cast<size_t>(r)];
    for (int c = 0; c < m; ++c) s += K[static_cast<size_t>(r) * m + c] * sol[static_cast<size_t>(c)];
    resid += s * s;
    scale += rhs[static_cast<size_t>(r)] * rhs[static_cast<size_t>(r)];
  }
  if (!(std::sqrt(resid) <= 1e-10 * std::max(1.0, std::sqrt(scale)) + 1e-12))
    throw std::runtime_error("kkt_equality: KKT residual too large (near-singular system)");
  return {sol.begin(), sol.begin() + n};
}

std::vector<double> kkt_equality(std::span<const double> H, std::span<const double> g,
                                 double gamma) {
  std::vector<double> ones(g.size(), 1.0);
  return kkt_equality_weighted(H, g, ones, gamma);
}

}  // namespace eqcd::oracle
