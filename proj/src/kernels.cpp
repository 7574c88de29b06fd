#include "eqcd/kernels.hpp"

#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eqcd::kernels {

namespace {

thread_local bool t_force_serial = false;

// Work thresholds below which a parallel region costs more than it saves.
constexpr int kMinParLinear = 1 << 14;
constexpr int kMinParPairDim = 256;

int hw_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

bool want_par(std::int64_t work, std::int64_t threshold) {
  return !t_force_serial && hw_threads() > 1 && work >= threshold;
}

inline void take_max(MinMax& mm, int idx, double val) {
  if (mm.imax < 0 || val > mm.vmax) {
    mm.imax = idx;
    mm.vmax = val;
  }
  if (mm.imin < 0 || val < mm.vmin) {
    mm.imin = idx;
    mm.vmin = val;
  }
}

// Merge b into a preserving lowest-index ties; b covers higher indices.
inline void merge_minmax(MinMax& a, const MinMax& b) {
  if (b.imax >= 0 && (a.imax < 0 || b.vmax > a.vmax)) {
    a.imax = b.imax;
    a.vmax = b.vmax;
  }
  if (b.imin >= 0 && (a.imin < 0 || b.vmin < a.vmin)) {
    a.imin = b.imin;
    a.vmin = b.vmin;
  }
}

inline bool pair_less(int i1, int j1, int i2, int j2) {
  return i1 < i2 || (i1 == i2 && j1 < j2);
}

inline void take_pair_max(PairBest& p, int i, int j, double score) {
  if (p.i < 0 || score > p.score) p = {i, j, score};
}

inline void merge_pair_max(PairBest& a, const PairBest& b) {
  if (b.i < 0) return;
  if (a.i < 0 || b.score > a.score ||
      (b.score == a.score && pair_less(b.i, b.j, a.i, a.j)))
    a = b;
}

inline void take_pair_min(PairBest& p, int i, int j, double score) {
  if (p.i < 0 || score < p.score) p = {i, j, score};
}

inline void merge_pair_min(PairBest& a, const PairBest& b) {
  if (b.i < 0) return;
  if (a.i < 0 || b.score < a.score ||
      (b.score == a.score && pair_less(b.i, b.j, a.i, a.j)))
    a = b;
}

inline double gsq_model(double gdiff, double slack_i, double slack_j, double alpha, double* m_out) {
  double m = 0.5 * alpha * gdiff;
  if (std::isfinite(slack_i) && slack_i < m) m = slack_i;
  if (std::isfinite(slack_j) && slack_j < m) m = slack_j;
  if (m_out) *m_out = m;
  return -gdiff * m + m * m / alpha;
}

inline double dot(const double* a, const double* b, int m) {
  double s = 0.0;
  for (int r = 0; r < m; ++r) s += a[r] * b[r];
  return s;
}

}  // namespace

// ---------------------------------------------------------------- serial

namespace serial {

MinMax argminmax(std::span<const double> v) {
  MinMax mm;
  for (int i = 0; i < static_cast<int>(v.size()); ++i) take_max(mm, i, v[i]);
  return mm;
}

MinMax argminmax_masked(std::span<const double> v, std::span<const unsigned char> allow_max,
                        std::span<const unsigned char> allow_min) {
  MinMax mm;
  for (int i = 0; i < static_cast<int>(v.size()); ++i) {
    if (allow_max[i] && (mm.imax < 0 || v[i] > mm.vmax)) {
      mm.imax = i;
      mm.vmax = v[i];
    }
    if (allow_min[i] && (mm.imin < 0 || v[i] < mm.vmin)) {
      mm.imin = i;
      mm.vmin = v[i];
    }
  }
  return mm;
}

MinMax argminmax_shifted_scaled(std::span<const double> v, std::span<const double> inv_scale,
                                double mu) {
  MinMax mm;
  for (int i = 0; i < static_cast<int>(v.size()); ++i)
    take_max(mm, i, (v[i] - mu) * inv_scale[i]);
  return mm;
}

PairBest best_pair_gsl(std::span<const double> g, std::span<const double> Li) {
  const int n = static_cast<int>(g.size());
  PairBest best;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      take_pair_max(best, i, j, (g[i] - g[j]) / std::sqrt(Li[i] + Li[j]));
    }
  return best;
}

PairBest best_pair_gsl1(std::span<const double> g, std::span<const double> sqrtLi) {
  const int n = static_cast<int>(g.size());
  PairBest best;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      take_pair_max(best, i, j, (g[i] - g[j]) / (sqrtLi[i] + sqrtLi[j]));
    }
  return best;
}

PairBest best_pair_gsq_bound(std::span<const double> g, std::span<const double> x,
                             std::span<const double> lower, std::span<const double> upper,
                             double alpha) {
  const int n = static_cast<int>(g.size());
  PairBest best;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i || g[i] < g[j]) continue;
      const double v = gsq_model(g[i] - g[j], x[i] - lower[i], upper[j] - x[j], alpha, nullptr);
      take_pair_min(best, i, j, v);
    }
  return best;
}

double max_pair_curvature(std::span<const double> H, int n) {
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double hii = H[static_cast<size_t>(i) * n + i];
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (hii + H[static_cast<size_t>(j) * n + j] -
                              2.0 * H[static_cast<size_t>(i) * n + j]);
      if (v > best) best = v;
    }
  }
  return best;
}

void gram(std::span<const double> A, int m, int n, std::span<double> H) {
  for (int i = 0; i < n; ++i) {
    const double* ci = A.data() + static_cast<size_t>(i) * m;
    for (int j = i; j < n; ++j) {
      const double v = dot(ci, A.data() + static_cast<size_t>(j) * m, m);
      H[static_cast<size_t>(i) * n + j] = v;
      H[static_cast<size_t>(j) * n + i] = v;
    }
  }
}

void axpy_pair(std::span<double> g, std::span<const double> col_i, std::span<const double> col_j,
               double delta) {
  const int n = static_cast<int>(g.size());
  for (int r = 0; r < n; ++r) g[r] += delta * (col_i[r] - col_j[r]);
}

void add_scaled_cols(std::span<double> g, std::span<const std::span<const double>> cols,
                     std::span<const double> values) {
  const int n = static_cast<int>(g.size());
  for (int r = 0; r < n; ++r) {
    double acc = g[r];
    for (size_t t = 0; t < cols.size(); ++t) acc += values[t] * cols[t][r];
    g[r] = acc;
  }
}

}  // namespace serial

// ------------------------------------------------------------------ par

namespace par {

#ifdef _OPENMP

MinMax argminmax(std::span<const double> v) {
  const int n = static_cast<int>(v.size());
  const int nth = hw_threads();
  std::vector<MinMax> part(static_cast<size_t>(nth));
#pragma omp parallel num_threads(nth)
  {
    MinMax local;
#pragma omp for schedule(static)
    for (int i = 0; i < n; ++i) take_max(local, i, v[i]);
    part[static_cast<size_t>(omp_get_thread_num())] = local;
  }
  MinMax mm;
  for (const MinMax& p : part) merge_minmax(mm, p);
  return mm;
}

MinMax argminmax_masked(std::span<const double> v, std::span<const unsigned char> allow_max,
                        std::span<const unsigned char> allow_min) {
  const int n = static_cast<int>(v.size());
  const int nth = hw_threads();
  std::vector<MinMax> part(static_cast<size_t>(nth));
#pragma omp parallel num_threads(nth)
  {
    MinMax local;
#pragma omp for schedule(static)
    for (int i = 0; i < n; ++i) {
      if (allow_max[i] && (local.imax < 0 || v[i] > local.vmax)) {
        local.imax = i;
        local.vmax = v[i];
      }
      if (allow_min[i] && (local.imin < 0 || v[i] < local.vmin)) {
        local.imin = i;
        local.vmin = v[i];
      }
    }
    part[static_cast<size_t>(omp_get_thread_num())] = local;
  }
  MinMax mm;
  for (const MinMax& p : part) merge_minmax(mm, p);
  return mm;
}

MinMax argminmax_shifted_scaled(std::span<const double> v, std::span<const double> inv_scale,
                                double mu) {
  const int n = static_cast<int>(v.size());
  const int nth = hw_threads();
  std::vector<MinMax> part(static_cast<size_t>(nth));
#pragma omp parallel num_threads(nth)
  {
    MinMax local;
#pragma omp for schedule(static)
    for (int i = 0; i < n; ++i) take_max(local, i, (v[i] - mu) * inv_scale[i]);
    part[static_cast<size_t>(omp_get_thread_num())] = local;
  }
  MinMax mm;
  for (const MinMax& p : part) merge_minmax(mm, p);
  return mm;
}

PairBest best_pair_gsl(std::span<const double> g, std::span<const double> Li) {
  const int n = static_cast<int>(g.size());
  const int nth = hw_threads();
  std::vector<PairBest> part(static_cast<size_t>(nth));
#pragma omp parallel num_threads(nth)
  {
    PairBest local;
#pragma omp for schedule(static)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        take_pair_max(local, i, j, (g[i] - g[j]) / std::sqrt(Li[i] + Li[j]));
      }
    part[static_cast<size_t>(omp_get_thread_num())] = local;
  }
  PairBest best;
  for (const PairBest& p : part) merge_pair_max(best, p);
  return best;
}

PairBest best_pair_gsl1(std::span<const double> g, std::span<const double> sqrtLi) {
  const int n = static_cast<int>(g.size());
  const int nth = hw_threads();
  std::vector<PairBest> part(static_cast<size_t>(nth));
#pragma omp parallel num_threads(nth)
  {
    PairBest local;
#pragma omp for schedule(static)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        take_pair_max(local, i, j, (g[i] - g[j]) / (sqrtLi[i] + sqrtLi[j]));
      }
    part[static_cast<size_t>(omp_get_thread_num())] = local;
  }
  PairBest best;
  for (const PairBest& p : part) merge_pair_max(best, p);
  return best;
}

PairBest best_pair_gsq_bound(std::span<const double> g, std::span<const double> x,
                             std::span<const double> lower, std::span<const double> upper,
                             double alpha) {
  const int n = static_cast<int>(g.size());
  const int nth = hw_threads();
  std::vector<PairBest> part(static_cast<size_t>(nth));
#pragma omp parallel num_threads(nth)
  {
    PairBest local;
#pragma omp for schedule(static)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (j == i || g[i] < g[j]) continue;
        const double v = gsq_model(g[i] - g[j], x[i] - lower[i], upper[j] - x[j], alpha, nullptr);
        take_pair_min(local, i, j, v);
      }
    part[static_cast<size_t>(omp_get_thread_num())] = local;
  }
  PairBest best;
  for (const PairBest& p : part) merge_pair_min(best, p);
  return best;
}

double max_pair_curvature(std::span<const double> H, int n) {
  double best = -std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static, 1) reduction(max : best)
  for (int i = 0; i < n; ++i) {
    const double hii = H[static_cast<size_t>(i) * n + i];
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (hii + H[static_cast<size_t>(j) * n + j] -
                              2.0 * H[static_cast<size_t>(i) * n + j]);
      if (v > best) best = v;
    }
  }
  return best;
}

void gram(std::span<const double> A, int m, int n, std::span<double> H) {
#pragma omp parallel for schedule(static, 1)
  for (int i = 0; i < n; ++i) {
    const double* ci = A.data() + static_cast<size_t>(i) * m;
    for (int j = i; j < n; ++j) {
      const double v = dot(ci, A.data() + static_cast<size_t>(j) * m, m);
      H[static_cast<size_t>(i) * n + j] = v;
      H[static_cast<size_t>(j) * n + i] = v;
    }
  }
}

void axpy_pair(std::span<double> g, std::span<const double> col_i, std::span<const double> col_j,
               double delta) {
  const int n = static_cast<int>(g.size());
#pragma omp parallel for schedule(static)
  for (int r = 0; r < n; ++r) g[r] += delta * (col_i[r] - col_j[r]);
}

void add_scaled_cols(std::span<double> g, std::span<const std::span<const double>> cols,
                     std::span<const double> values) {
  const int n = static_cast<int>(g.size());
#pragma omp parallel for schedule(static)
  for (int r = 0; r < n; ++r) {
    double acc = g[r];
    for (size_t t = 0; t < cols.size(); ++t) acc += values[t] * cols[t][r];
    g[r] = acc;
  }
}

#else  // !_OPENMP: parallel variants degrade to the reference implementations.

MinMax argminmax(std::span<const double> v) { return serial::argminmax(v); }
MinMax argminmax_masked(std::span<const double> v, std::span<const unsigned char> a,
                        std::span<const unsigned char> b) {
  return serial::argminmax_masked(v, a, b);
}
MinMax argminmax_shifted_scaled(std::span<const double> v, std::span<const double> s, double mu) {
  return serial::argminmax_shifted_scaled(v, s, mu);
}
PairBest best_pair_gsl(std::span<const double> g, std::span<const double> Li) {
  return serial::best_pair_gsl(g, Li);
}
PairBest best_pair_gsl1(std::span<const double> g, std::span<const double> s) {
  return serial::best_pair_gsl1(g, s);
}
PairBest best_pair_gsq_bound(std::span<const double> g, std::span<const double> x,
                             std::span<const double> l, std::span<const double> u, double alpha) {
  return serial::best_pair_gsq_bound(g, x, l, u, alpha);
}
double max_pair_curvature(std::span<const double> H, int n) {
  return serial::max_pair_curvature(H, n);
}
void gram(std::span<const double> A, int m, int n, std::span<double> H) {
  serial::gram(A, m, n, H);
}
void axpy_pair(std::span<double> g, std::span<const double> ci, std::span<const double> cj,
               double delta) {
  serial::axpy_pair(g, ci, cj, delta);
}
void add_scaled_cols(std::span<double> g, std::span<const std::span<const double>> cols,
                     std::span<const double> values) {
  serial::add_scaled_cols(g, cols, values);
}

#endif

}  // namespace par

// ------------------------------------------------------------- dispatch

MinMax argminmax(std::span<const double> v) {
  return want_par(static_cast<std::int64_t>(v.size()), kMinParLinear) ? par::argminmax(v)
                                                                      : serial::argminmax(v);
}

MinMax argminmax_masked(std::span<const double> v, std::span<const unsigned char> allow_max,
                        std::span<const unsigned char> allow_min) {
  return want_par(static_cast<std::int64_t>(v.size()), kMinParLinear)
             ? par::argminmax_masked(v, allow_max, allow_min)
             : serial::argminmax_masked(v, allow_max, allow_min);
}

MinMax argminmax_shifted_scaled(std::span<const double> v, std::span<const double> inv_scale,
                                double mu) {
  return want_par(static_cast<std::int64_t>(v.size()), kMinParLinear)
             ? par::argminmax_shifted_scaled(v, inv_scale, mu)
             : serial::argminmax_shifted_scaled(v, inv_scale, mu);
}

PairBest best_pair_gsl(std::span<const double> g, std::span<const double> Li) {
  return want_par(static_cast<std::int64_t>(g.size()), kMinParPairDim)
             ? par::best_pair_gsl(g, Li)
             : serial::best_pair_gsl(g, Li);
}

PairBest best_pair_gsl1(std::span<const double> g, std::span<const double> sqrtLi) {
  return want_par(static_cast<std::int64_t>(g.size()), kMinParPairDim)
             ? par::best_pair_gsl1(g, sqrtLi)
             : serial::best_pair_gsl1(g, sqrtLi);
}

PairBest best_pair_gsq_bound(std::span<const double> g, std::span<const double> x,
                             std::span<const double> lower, std::span<const double> upper,
                             double alpha) {
  return want_par(static_cast<std::int64_t>(g.size()), kMinParPairDim)
             ? par::best_pair_gsq_bound(g, x, lower, upper, alpha)
             : serial::best_pair_gsq_bound(g, x, lower, upper, alpha);
}

double max_pair_curvature(std::span<const double> H, int n) {
  return want_par(n, kMinParPairDim) ? par::max_pair_curvature(H, n)
                                     : serial::max_pair_curvature(H, n);
}

void gram(std::span<const double> A, int m, int n, std::span<double> H) {
  if (want_par(n, 64) && static_cast<std::int64_t>(m) * n >= kMinParLinear)
    par::gram(A, m, n, H);
  else
    serial::gram(A, m, n, H);
}

void axpy_pair(std::span<double> g, std::span<const double> col_i, std::span<const double> col_j,
               double delta) {
  if (want_par(static_cast<std::int64_t>(g.size()), kMinParLinear))
    par::axpy_pair(g, col_i, col_j, delta);
  else
    serial::axpy_pair(g, col_i, col_j, delta);
}

void add_scaled_cols(std::span<double> g, std::span<const std::span<const double>> cols,
                     std::span<const double> values) {
  if (want_par(static_cast<std::int64_t>(g.size() * cols.size()), kMinParLinear))
    par::add_scaled_cols(g, cols, values);
  else
    serial::add_scaled_cols(g, cols, values);
}

SerialScope::SerialScope() : prev_(t_force_serial) { t_force_serial = true; }
SerialScope::~SerialScope() { t_force_serial = prev_; }

bool parallel_enabled() { return !t_force_serial && hw_threads() > 1; }

int max_threads() { return hw_threads(); }

}  // namespace eqcd::kernels
