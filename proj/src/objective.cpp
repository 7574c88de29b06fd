#include "eqcd/objective.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "eqcd/kernels.hpp"

namespace eqcd {

double Objective::hessian_entry(int, int) const {
  throw std::logic_error("Objective: hessian_entry unavailable for non-quadratic objective");
}

std::span<const double> Objective::hessian_col(int) const {
  throw std::logic_error("Objective: hessian_col unavailable for non-quadratic objective");
}

LeastSquares::LeastSquares(std::vector<double> A_colmajor, int m, int n, std::vector<double> b,
                           double ridge)
    : m_(m), n_(n), ridge_(ridge), A_(std::move(A_colmajor)), b_(std::move(b)) {
  if (m_ < 1 || n_ < 1) throw std::invalid_argument("LeastSquares: m, n must be >= 1");
  if (A_.size() != static_cast<size_t>(m_) * n_ || b_.size() != static_cast<size_t>(m_))
    throw std::invalid_argument("LeastSquares: matrix/rhs size mismatch");
  if (ridge_ < 0.0) throw std::invalid_argument("LeastSquares: ridge must be >= 0");

  hess_.assign(static_cast<size_t>(n_) * n_, 0.0);
  kernels::gram(A_, m_, n_, hess_);
  for (int i = 0; i < n_; ++i) hess_[static_cast<size_t>(i) * n_ + i] += ridge_;

  atb_.assign(static_cast<size_t>(n_), 0.0);
  for (int j = 0; j < n_; ++j) {
    const double* col = A_.data() + static_cast<size_t>(j) * m_;
    double s = 0.0;
    for (int r = 0; r < m_; ++r) s += col[r] * b_[r];
    atb_[j] = s;
  }
}

double LeastSquares::eval(std::span<const double> x) const {
  std::vector<double> r(b_.begin(), b_.end());
  for (int j = 0; j < n_; ++j) {
    const double* col = A_.data() + static_cast<size_t>(j) * m_;
    const double xj = x[j];
    for (int rr = 0; rr < m_; ++rr) r[rr] -= xj * col[rr];
  }
  double s = 0.0;
  for (double v : r) s += v * v;
  if (ridge_ > 0.0) {
    double xs = 0.0;
    for (int j = 0; j < n_; ++j) xs += x[j] * x[j];
    s += ridge_ * xs;
  }
  return 0.5 * s;
}

void LeastSquares::grad(std::span<const double> x, std::span<double> out) const {
  for (int i = 0; i < n_; ++i) {
    const double* row = hess_.data() + static_cast<size_t>(i) * n_;
    double s = -atb_[i];
    for (int j = 0; j < n_; ++j) s += row[j] * x[j];
    out[i] = s;
  }
}

double LeastSquares::partial(std::span<const double> x, int i) const {
  const double* row = hess_.data() + static_cast<size_t>(i) * n_;
  double s = -atb_[i];
  for (int j = 0; j < n_; ++j) s += row[j] * x[j];
  return s;
}

void LeastSquares::grad_residual_route(std::span<const double> x, std::span<double> out) const {
  std::vector<double> r(b_.size());
  for (int rr = 0; rr < m_; ++rr) r[rr] = -b_[rr];
  for (int j = 0; j < n_; ++j) {
    const double* col = A_.data() + static_cast<size_t>(j) * m_;
    const double xj = x[j];
    for (int rr = 0; rr < m_; ++rr) r[rr] += xj * col[rr];
  }
  for (int j = 0; j < n_; ++j) {
    const double* col = A_.data() + static_cast<size_t>(j) * m_;
    double s = 0.0;
    for (int rr = 0; rr < m_; ++rr) s += col[rr] * r[rr];
    out[j] = s + ridge_ * x[j];
  }
}

GeneratedProblem make_least_squares_from(const std::function<double()>& normal, int n, int m,
                                         bool column_scaled, double ridge) {
  if (n < 1 || m < 1) throw std::invalid_argument("make_least_squares: n, m must be >= 1");
  std::vector<double> A(static_cast<size_t>(m) * n);
  for (double& v : A) v = normal();

  std::vector<double> scales;
  if (column_scaled) {
    scales.resize(static_cast<size_t>(n));
    for (double& s : scales) s = normal();
    for (int j = 0; j < n; ++j) {
      double* col = A.data() + static_cast<size_t>(j) * m;
      for (int r = 0; r < m; ++r) col[r] *= scales[static_cast<size_t>(j)];
    }
  }

  std::vector<double> x_true(static_cast<size_t>(n));
  for (double& v : x_true) v = normal();
  std::vector<double> b(static_cast<size_t>(m));
  for (double& v : b) v = normal();  // noise z
  for (int j = 0; j < n; ++j) {
    const double* col = A.data() + static_cast<size_t>(j) * m;
    for (int r = 0; r < m; ++r) b[static_cast<size_t>(r)] += x_true[static_cast<size_t>(j)] * col[r];
  }

  return GeneratedProblem{LeastSquares(std::move(A), m, n, std::move(b), ridge),
                          std::move(x_true), std::move(scales)};
}

GeneratedProblem make_least_squares(int n, int m, std::uint64_t seed, bool column_scaled,
                                    double ridge) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  return make_least_squares_from([&]() { return dist(rng); }, n, m, column_scaled, ridge);
}

double compute_L2_exact(const LeastSquares& q) {
  if (q.dimension() < 2) throw std::invalid_argument("compute_L2_exact: need n >= 2");
  return kernels::max_pair_curvature(q.gram(), q.dimension());
}

double compute_L1_exact(const LeastSquares& q) { return compute_L2_exact(q) / 2.0; }

double compute_L2_upper(const LeastSquares& q) {
  double mx = 0.0;
  for (int i = 0; i < q.dimension(); ++i) mx = std::max(mx, q.hessian_entry(i, i));
  return 2.0 * mx;
}

std::vector<double> compute_Li(const LeastSquares& q) {
  std::vector<double> li(static_cast<size_t>(q.dimension()));
  for (int i = 0; i < q.dimension(); ++i) li[static_cast<size_t>(i)] = q.hessian_entry(i, i);
  return li;
}

double grad_check(const Objective& obj, std::span<const double> x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("grad_check: h must be positive");
  const int n = obj.dimension();
  std::vector<double> g(static_cast<size_t>(n));
  obj.grad(x, g);
  std::vector<double> xp(x.begin(), x.end());
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double xi = xp[static_cast<size_t>(i)];
    xp[static_cast<size_t>(i)] = xi + h;
    const double fp = obj.eval(xp);
    xp[static_cast<size_t>(i)] = xi - h;
    const double fm = obj.eval(xp);
    xp[static_cast<size_t>(i)] = xi;
    worst = std::max(worst, std::abs((fp - fm) / (2.0 * h) - g[static_cast<size_t>(i)]));
  }
  return worst;
}

namespace {

/// g(y) = f(y / a) with chain-rule gradient; keeps a materialized Hessian
/// when the inner objective is quadratic.
class ScaledVariablesObjective final : public Objective {
 public:
  ScaledVariablesObjective(std::shared_ptr<const Objective> inner, std::vector<double> a)
      : inner_(std::move(inner)), a_(std::move(a)) {
    const int n = inner_->dimension();
    inv_a_.resize(a_.size());
    for (size_t i = 0; i < a_.size(); ++i) inv_a_[i] = 1.0 / a_[i];
    if (inner_->is_quadratic()) {
      hess_.assign(static_cast<size_t>(n) * n, 0.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          hess_[static_cast<size_t>(i) * n + j] =
              inner_->hessian_entry(i, j) * inv_a_[static_cast<size_t>(i)] *
              inv_a_[static_cast<size_t>(j)];
    }
  }

  int dimension() const override { return inner_->dimension(); }

  double eval(std::span<const double> y) const override { return inner_->eval(unscaled(y)); }

  void grad(std::span<const double> y, std::span<double> out) const override {
    inner_->grad(unscaled(y), out);
    for (size_t i = 0; i < out.size(); ++i) out[i] *= inv_a_[i];
  }

  double partial(std::span<const double> y, int i) const override {
    return inner_->partial(unscaled(y), i) * inv_a_[static_cast<size_t>(i)];
  }

  bool is_quadratic() const override { return inner_->is_quadratic(); }

  double hessian_entry(int i, int j) const override {
    if (hess_.empty()) return Objective::hessian_entry(i, j);
    return hess_[static_cast<size_t>(i) * dimension() + j];
  }

  std::span<const double> hessian_col(int i) const override {
    if (hess_.empty()) return Objective::hessian_col(i);
    return {hess_.data() + static_cast<size_t>(i) * dimension(),
            static_cast<size_t>(dimension())};
  }

 private:
  std::vector<double> unscaled(std::span<const double> y) const {
    std::vector<double> x(y.size());
    for (size_t i = 0; i < y.size(); ++i) x[i] = y[i] * inv_a_[i];
    return x;
  }

  std::shared_ptr<const Objective> inner_;
  std::vector<double> a_, inv_a_;
  std::vector<double> hess_;
};

}  // namespace

Reparameterized reparameterize_weighted(std::shared_ptr<const Objective> obj,
                                        const ProblemSpec& spec) {
  if (!spec.weights) throw std::invalid_argument("reparameterize_weighted: spec has no weights");
  const auto& a = *spec.weights;
  bool unit = true;
  for (double v : a) {
    if (!(v > 0.0)) throw std::invalid_argument("reparameterize_weighted: weights must be positive");
    unit = unit && v == 1.0;
  }

  ProblemSpec out = spec;
  out.weights.reset();
  if (unit) return Reparameterized{std::move(obj), std::move(out), a};

  for (int i = 0; i < spec.n; ++i) {
    const double ai = a[static_cast<size_t>(i)];
    out.lower[static_cast<size_t>(i)] =
        (spec.lower[static_cast<size_t>(i)] == -kInf) ? -kInf : ai * spec.lower[static_cast<size_t>(i)];
    out.upper[static_cast<size_t>(i)] =
        (spec.upper[static_cast<size_t>(i)] == kInf) ? kInf : ai * spec.upper[static_cast<size_t>(i)];
  }
  auto scaled = std::make_shared<ScaledVariablesObjective>(std::move(obj), a);
  return Reparameterized{std::move(scaled), std::move(out), a};
}

std::vector<double> map_back_weighted(std::span<const double> y, std::span<const double> weights) {
  std::vector<double> x(y.size());
  for (size_t i = 0; i < y.size(); ++i) x[i] = y[i] / weights[i];
  return x;
}

}  // namespace eqcd
