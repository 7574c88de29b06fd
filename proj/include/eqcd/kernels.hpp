#pragma once

#include <span>
#include <vector>

namespace eqcd::kernels {

// Serial kernels are the reference semantics; the par:: variants must return
// results exactly equal to them (comparison-based reductions merge in chunk
// order, elementwise kernels have no reduction). The unqualified dispatchers
// pick par:: when OpenMP is available, the work is large enough to pay for a
// parallel region, and the caller has not forced serial execution.

struct MinMax {
  int imin = -1;
  int imax = -1;
  double vmin = 0.0;
  double vmax = 0.0;
};

struct PairBest {
  int i = -1;
  int j = -1;
  double score = 0.0;
};

namespace serial {

/// Lowest-index argmin/argmax of v.
MinMax argminmax(std::span<const double> v);

/// argminmax over masked candidate sets; index -1 when a set is empty.
MinMax argminmax_masked(std::span<const double> v, std::span<const unsigned char> allow_max,
                        std::span<const unsigned char> allow_min);

/// argmin/argmax of (v[i] - mu) * inv_scale[i].
MinMax argminmax_shifted_scaled(std::span<const double> v, std::span<const double> inv_scale,
                                double mu);

/// argmax over ordered pairs i != j of (g[i]-g[j]) / sqrt(Li[i]+Li[j]).
PairBest best_pair_gsl(std::span<const double> g, std::span<const double> Li);

/// argmax over ordered pairs i != j of (g[i]-g[j]) / (sqrtLi[i]+sqrtLi[j]).
PairBest best_pair_gsl1(std::span<const double> g, std::span<const double> sqrtLi);

/// Over ordered pairs with g[i] >= g[j]: truncated move
/// m = min{(alpha/2)(g[i]-g[j]), x[i]-l[i], u[j]-x[j]} (infinite slacks
/// skipped) and model value -m(g[i]-g[j]) + m^2/alpha; returns the pair with
/// minimal model value, ties lexicographic. score is the model value.
PairBest best_pair_gsq_bound(std::span<const double> g, std::span<const double> x,
                             std::span<const double> lower, std::span<const double> upper,
                             double alpha);

/// max over pairs i<j of (H[i,i] + H[j,j] - 2 H[i,j]) / 2 for row-major H.
double max_pair_curvature(std::span<const double> H, int n);

/// H = A^T A for column-major A (m x n); H row-major n x n, symmetric.
void gram(std::span<const double> A, int m, int n, std::span<double> H);

/// g += delta * (col_i - col_j).
void axpy_pair(std::span<double> g, std::span<const double> col_i, std::span<const double> col_j,
               double delta);

/// g += sum_t values[t] * cols[t] for spans of equal length.
void add_scaled_cols(std::span<double> g, std::span<const std::span<const double>> cols,
                     std::span<const double> values);

}  // namespace serial

namespace par {

MinMax argminmax(std::span<const double> v);
MinMax argminmax_masked(std::span<const double> v, std::span<const unsigned char> allow_max,
                        std::span<const unsigned char> allow_min);
MinMax argminmax_shifted_scaled(std::span<const double> v, std::span<const double> inv_scale,
                                double mu);
PairBest best_pair_gsl(std::span<const double> g, std::span<const double> Li);
PairBest best_pair_gsl1(std::span<const double> g, std::span<const double> sqrtLi);
PairBest best_pair_gsq_bound(std::span<const double> g, std::span<const double> x,
                             std::span<const double> lower, std::span<const double> upper,
                             double alpha);
double max_pair_curvature(std::span<const double> H, int n);
void gram(std::span<const double> A, int m, int n, std::span<double> H);
void axpy_pair(std::span<double> g, std::span<const double> col_i, std::span<const double> col_j,
               double delta);
void add_scaled_cols(std::span<double> g, std::span<const std::span<const double>> cols,
                     std::span<const double> values);

}  // namespace par

// Dispatchers.
MinMax argminmax(std::span<const double> v);
MinMax argminmax_masked(std::span<const double> v, std::span<const unsigned char> allow_max,
                        std::span<const unsigned char> allow_min);
MinMax argminmax_shifted_scaled(std::span<const double> v, std::span<const double> inv_scale,
                                double mu);
PairBest best_pair_gsl(std::span<const double> g, std::span<const double> Li);
PairBest best_pair_gsl1(std::span<const double> g, std::span<const double> sqrtLi);
PairBest best_pair_gsq_bound(std::span<const double> g, std::span<const double> x,
                             std::span<const double> lower, std::span<const double> upper,
                             double alpha);
double max_pair_curvature(std::span<const double> H, int n);
void gram(std::span<const double> A, int m, int n, std::span<double> H);
void axpy_pair(std::span<double> g, std::span<const double> col_i, std::span<const double> col_j,
               double delta);
void add_scaled_cols(std::span<double> g, std::span<const std::span<const double>> cols,
                     std::span<const double> values);

/// Scoped opt-out from parallel kernels for the current thread; used by
/// experiment workers that already run one solver per thread.
class SerialScope {
 public:
  SerialScope();
  ~SerialScope();
  SerialScope(const SerialScope&) = delete;
  SerialScope& operator=(const SerialScope&) = delete;

 private:
  bool prev_;
};

bool parallel_enabled();
int max_threads();

}  // namespace eqcd::kernels
