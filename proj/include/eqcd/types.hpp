#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eqcd {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Default absolute tolerance on the sum constraint and per-coordinate bounds.
// Sized for drift accumulated over ~1e6 two-coordinate updates.
inline constexpr double kFeasTol = 1e-8;

/// Problem description: minimize f(x) subject to sum_i w_i x_i = gamma and
/// l_i <= x_i <= u_i. Bounds default to (-inf, +inf); weights default to 1.
struct ProblemSpec {
  int n = 0;
  double gamma = 0.0;
  std::vector<double> lower;  // length n, entries may be -inf
  std::vector<double> upper;  // length n, entries may be +inf
  std::optional<std::vector<double>> weights;  // strictly positive when present

  static ProblemSpec unbounded(int n, double gamma) {
    ProblemSpec s;
    s.n = n;
    s.gamma = gamma;
    s.lower.assign(static_cast<size_t>(n), -kInf);
    s.upper.assign(static_cast<size_t>(n), kInf);
    return s;
  }

  static ProblemSpec boxed(int n, double gamma, double lo, double hi) {
    ProblemSpec s = unbounded(n, gamma);
    s.lower.assign(static_cast<size_t>(n), lo);
    s.upper.assign(static_cast<size_t>(n), hi);
    return s;
  }

  bool has_bounds() const {
    for (double l : lower)
      if (l != -kInf) return true;
    for (double u : upper)
      if (u != kInf) return true;
    return false;
  }

  double weight(int i) const { return weights ? (*weights)[static_cast<size_t>(i)] : 1.0; }

  /// Throws if the spec is internally inconsistent (crossed bounds, empty
  /// feasible set, nonpositive weight).
  void validate() const;
};

/// Current solver state. Confined to a single run; grad mirrors the
/// objective's gradient at x and is refreshed after every step.
struct Iterate {
  std::vector<double> x;
  std::int64_t k = 0;
  double fval = 0.0;
  std::vector<double> grad;
};

/// Smoothness data for one problem instance.
///   L2: pairwise block constant; L1 = L2/2 exactly; Li: per-coordinate.
struct LipschitzInfo {
  double L2 = 0.0;
  double L1 = 0.0;
  std::vector<double> Li;

  static LipschitzInfo from_L2(double L2_, std::vector<double> Li_) {
    if (!(L2_ > 0.0)) throw std::invalid_argument("LipschitzInfo: L2 must be positive");
    for (double v : Li_)
      if (!(v > 0.0)) throw std::invalid_argument("LipschitzInfo: Li must be positive");
    return LipschitzInfo{L2_, L2_ / 2.0, std::move(Li_)};
  }
};

enum class BoundaryHit : std::uint8_t { Interior, AtLower, AtUpper };

/// Sparse feasible step: sum of values is zero (weighted analogue under
/// weights), support indices distinct, values nonzero. boundary_hits marks
/// support entries that land exactly on a bound; apply_direction snaps those.
struct Direction {
  std::vector<int> support;
  std::vector<double> values;
  std::vector<BoundaryHit> boundary_hits;

  bool empty() const { return support.empty(); }
  int support_size() const { return static_cast<int>(support.size()); }

  int interior_moves() const {
    int c = 0;
    for (BoundaryHit h : boundary_hits) c += (h == BoundaryHit::Interior);
    return c;
  }
};

/// One trace row. Optional fields are absent for records that do not
/// correspond to a 2-coordinate step (the initial record, GS-1 multi-moves).
struct TraceRecord {
  std::int64_t iter = 0;
  double fval = 0.0;
  std::optional<double> gap;
  double optimality = 0.0;
  std::string rule;
  int support_size = 0;
  std::optional<std::pair<int, int>> pair;
  std::optional<double> delta;
  std::int64_t elapsed_ns = 0;
};

using Trace = std::vector<TraceRecord>;

}  // namespace eqcd
