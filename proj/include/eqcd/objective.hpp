#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "eqcd/types.hpp"

namespace eqcd {

/// Smooth objective. Quadratic instances additionally expose their (constant)
/// Hessian so the solver can maintain gradients incrementally.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual int dimension() const = 0;
  virtual double eval(std::span<const double> x) const = 0;
  virtual void grad(std::span<const double> x, std::span<double> out) const = 0;
  virtual double partial(std::span<const double> x, int i) const = 0;

  virtual bool is_quadratic() const { return false; }
  virtual double hessian_entry(int i, int j) const;
  virtual std::span<const double> hessian_col(int i) const;
};

/// f(x) = 1/2 ||Ax - b||^2 + ridge/2 ||x||^2 with cached gram AᵀA + ridge·I
/// and Aᵀb. A is stored column-major.
class LeastSquares final : public Objective {
 public:
  LeastSquares(std::vector<double> A_colmajor, int m, int n, std::vector<double> b,
               double ridge = 0.0);

  int dimension() const override { return n_; }
  int rows() const { return m_; }
  double ridge() const { return ridge_; }
  double eval(std::span<const double> x) const override;
  void grad(std::span<const double> x, std::span<double> out) const override;
  double partial(std::span<const double> x, int i) const override;

  bool is_quadratic() const override { return true; }
  double hessian_entry(int i, int j) const override {
    return hess_[static_cast<size_t>(i) * n_ + j];
  }
  std::span<const double> hessian_col(int i) const override {
    return {hess_.data() + static_cast<size_t>(i) * n_, static_cast<size_t>(n_)};
  }

  std::span<const double> matrix() const { return A_; }
  std::span<const double> matrix_col(int j) const {
    return {A_.data() + static_cast<size_t>(j) * m_, static_cast<size_t>(m_)};
  }
  std::span<const double> rhs() const { return b_; }
  std::span<const double> gram() const { return hess_; }
  std::span<const double> atb() const { return atb_; }

  /// Gradient through the residual route Aᵀ(Ax-b) + ridge·x; the gram route
  /// above must agree with it to rounding.
  void grad_residual_route(std::span<const double> x, std::span<double> out) const;

 private:
  int m_, n_;
  double ridge_;
  std::vector<double> A_;     // m x n, column-major
  std::vector<double> b_;     // m
  std::vector<double> hess_;  // n x n row-major, AᵀA + ridge·I
  std::vector<double> atb_;   // n
};

struct GeneratedProblem {
  LeastSquares objective;
  std::vector<double> x_true;
  std::vector<double> column_scales;  // empty unless column_scaled
};

/// Synthetic dense instance: A entries standard normal, b = A·x_true + z, and
/// optionally each column of A rescaled by an independent normal draw before
/// b is formed. Draw order: A (column-major), column scales, x_true, z.
GeneratedProblem make_least_squares(int n, int m, std::uint64_t seed, bool column_scaled,
                                    double ridge = 0.0);

/// Same construction from a caller-supplied draw source (tests stub this).
GeneratedProblem make_least_squares_from(const std::function<double()>& normal, int n, int m,
                                         bool column_scaled, double ridge = 0.0);

/// Exact pairwise block constant: max over i<j of (H_ii + H_jj - 2 H_ij) / 2.
double compute_L2_exact(const LeastSquares& q);

/// 1-norm constant, exactly L2/2.
double compute_L1_exact(const LeastSquares& q);

/// Cheap upper bound 2·max_i H_ii, usable when an exact pair scan is too
/// expensive or the objective is not quadratic.
double compute_L2_upper(const LeastSquares& q);

/// Coordinate-wise constants, H_ii for quadratics.
std::vector<double> compute_Li(const LeastSquares& q);

/// Max abs error between central finite differences and obj.grad at x.
double grad_check(const Objective& obj, std::span<const double> x, double h);

struct Reparameterized {
  std::shared_ptr<const Objective> objective;
  ProblemSpec spec;
  std::vector<double> weights;  // original a_i, for mapping solutions back
};

/// Substitutes y_i = a_i x_i so the weighted constraint sum a_i x_i = gamma
/// becomes sum y_i = gamma with unit weights; bounds map to [a_i l_i, a_i u_i]
/// and the objective becomes g(y) = f(y / a).
Reparameterized reparameterize_weighted(std::shared_ptr<const Objective> obj,
                                        const ProblemSpec& spec);

/// x_i = y_i / a_i.
std::vector<double> map_back_weighted(std::span<const double> y, std::span<const double> weights);

}  // namespace eqcd
