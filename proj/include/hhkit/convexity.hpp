#pragma once

// Grid certification of (alpha,m)-convexity, r-convexity and the two
// convex-dominance conditions. A Pass means that no sampled triple
// (x, y, lambda) violated the defining inequality by more than tol.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hhkit/expr.hpp"
#include "hhkit/means.hpp"

namespace hhkit {

/// f(tx + m(1-t)y) <= t^alpha f(x) + m(1 - t^alpha) f(y); (1,1) is plain convexity.
struct AlphaM {
  double alpha = 1.0;
  double m = 1.0;
};

/// f(lambda x + (1-lambda) y) <= M_r(f(x), f(y); lambda) for positive f.
struct RConvex {
  double r = 1.0;
};

using ClassParams = std::variant<AlphaM, RConvex>;

struct GridSpec {
  std::size_t n_xy = 33;
  std::size_t n_lambda = 65;
  double tol = 1e-9;

  void validate() const {
    if (n_xy < 2) throw std::invalid_argument("grid needs at least 2 x/y points");
    if (n_lambda < 3) throw std::invalid_argument("grid needs at least 3 lambda points");
    if (!(tol >= 0.0)) throw std::invalid_argument("grid tolerance must be non-negative");
  }
  std::size_t points() const { return n_xy * n_xy * n_lambda; }
};

struct Witness {
  double x, y, lambda;
  double lhs, rhs;
  double gap;  // lhs - rhs
};

struct CheckResult {
  std::optional<Witness> witness;  // largest-gap violation, first in scan order on ties
  std::size_t points_checked = 0;
  std::size_t violations = 0;
  std::optional<bool> origin_nonpositive;  // f(0) <= 0, reported when the interval starts at 0

  bool passed() const noexcept { return !witness.has_value(); }
};

/// Raised by the r-convexity checks when the function is not strictly positive.
class NonPositiveFunction : public std::runtime_error {
 public:
  NonPositiveFunction(double x, double value)
      : std::runtime_error("function is not positive at x=" + DomainError::format_number(x) +
                           " (value " + DomainError::format_number(value) + ")"),
        x_(x) {}
  double x() const noexcept { return x_; }

 private:
  double x_;
};

struct PointValues {
  double lhs, rhs;
  double gap() const noexcept { return lhs - rhs; }
};

/// Uniform samples of [lo, hi] with both endpoints exact.
inline std::vector<double> grid_points(double lo, double hi, std::size_t n) {
  std::vector<double> pts(n);
  for (std::size_t i = 0; i < n; ++i)
    pts[i] = lo + (hi - lo) * (static_cast<double>(i) / static_cast<double>(n - 1));
  pts.front() = lo;
  pts.back() = hi;
  return pts;
}

namespace detail {

inline void validate_alpha_m(double alpha, double m) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0,1]");
  if (!(m > 0.0 && m <= 1.0)) throw std::invalid_argument("m must lie in (0,1]");
}

inline void validate_alpha_m_interval(const Interval& iv, double m) {
  // With m < 1 the evaluation point tx + m(1-t)y is pulled toward 0.
  if (m < 1.0 && iv.lo < 0.0) throw std::invalid_argument("(alpha,m) checks with m < 1 need lo >= 0");
}

// Kernels take already-evaluated endpoint values so the scan and the
// pointwise API perform bit-identical arithmetic.
inline PointValues alpha_m_kernel(double fx, double fy, double fmix, double ta, double m) {
  return {fmix, ta * fx + m * (1.0 - ta) * fy};
}

inline PointValues dominated_alpha_m_kernel(double fx, double fy, double fmix, double gx, double gy,
                                            double gmix, double ta, double m) {
  return {std::fabs(ta * fx + m * (1.0 - ta) * fy - fmix), ta * gx + m * (1.0 - ta) * gy - gmix};
}

inline double alpha_m_arg(double x, double y, double t, double m) { return t * x + m * (1.0 - t) * y; }
inline double r_arg(double x, double y, double t) { return t * x + (1.0 - t) * y; }

inline double positive_value(const Expr& f, double x) {
  const double v = f(x);
  if (!(v > 0.0)) throw NonPositiveFunction(x, v);
  return v;
}

// Row-major scan (x outer, y middle, lambda inner). `point(i, j, l)` returns
// the two sides; `visit(i, j, l, violated)` observes every triple.
template <class Point, class Visit>
CheckResult scan_grid(const GridSpec& grid, const std::vector<double>& xs, const std::vector<double>& ts,
                      Point&& point, Visit&& visit) {
  CheckResult res;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < xs.size(); ++j) {
      for (std::size_t l = 0; l < ts.size(); ++l) {
        const PointValues pv = point(i, j, l);
        const double gap = pv.gap();
        const bool violated = gap > grid.tol;
        ++res.points_checked;
        visit(i, j, l, violated);
        if (!violated) continue;
        ++res.violations;
        if (!res.witness || gap > res.witness->gap)
          res.witness = Witness{xs[i], xs[j], ts[l], pv.lhs, pv.rhs, gap};
      }
    }
  }
  return res;
}

struct NoVisit {
  void operator()(std::size_t, std::size_t, std::size_t, bool) const noexcept {}
};

inline std::vector<double> eval_all(const Expr& f, const std::vector<double>& xs) {
  std::vector<double> v(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) v[i] = f(xs[i]);
  return v;
}

inline std::vector<double> eval_all_positive(const Expr& f, const std::vector<double>& xs) {
  std::vector<double> v(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) v[i] = positive_value(f, xs[i]);
  return v;
}

inline std::vector<double> powers(const std::vector<double>& ts, double alpha) {
  std::vector<double> v(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) v[i] = alpha == 1.0 ? ts[i] : std::pow(ts[i], alpha);
  return v;
}

inline std::optional<bool> origin_flag(const Expr& f, const Interval& iv) {
  if (iv.lo != 0.0) return std::nullopt;
  return f(0.0) <= 0.0;
}

template <class Visit>
CheckResult alpha_m_scan(const Expr& f, const Interval& iv, double alpha, double m, const GridSpec& grid,
                         Visit&& visit) {
  validate_alpha_m(alpha, m);
  validate_alpha_m_interval(iv, m);
  grid.validate();
  const auto xs = grid_points(iv.lo, iv.hi, grid.n_xy);
  const auto ts = grid_points(0.0, 1.0, grid.n_lambda);
  const auto fx = eval_all(f, xs);
  const auto ta = powers(ts, alpha);
  CheckResult res = scan_grid(
      grid, xs, ts,
      [&](std::size_t i, std::size_t j, std::size_t l) {
        return alpha_m_kernel(fx[i], fx[j], f(alpha_m_arg(xs[i], xs[j], ts[l], m)), ta[l], m);
      },
      visit);
  res.origin_nonpositive = origin_flag(f, iv);
  return res;
}

template <class Visit>
CheckResult dominated_alpha_m_scan(const Expr& f, const Expr& g, const Interval& iv, double alpha, double m,
                                   const GridSpec& grid, Visit&& visit) {
  validate_alpha_m(alpha, m);
  validate_alpha_m_interval(iv, m);
  grid.validate();
  const auto xs = grid_points(iv.lo, iv.hi, grid.n_xy);
  const auto ts = grid_points(0.0, 1.0, grid.n_lambda);
  const auto fx = eval_all(f, xs);
  const auto gx = eval_all(g, xs);
  const auto ta = powers(ts, alpha);
  return scan_grid(
      grid, xs, ts,
      [&](std::size_t i, std::size_t j, std::size_t l) {
        const double u = alpha_m_arg(xs[i], xs[j], ts[l], m);
        return dominated_alpha_m_kernel(fx[i], fx[j], f(u), gx[i], gx[j], g(u), ta[l], m);
      },
      visit);
}

}  // namespace detail

/// Certifies (alpha,m)-convexity of f on the grid over iv.
inline CheckResult check_alpha_m_convex(const Expr& f, const Interval& iv, double alpha, double m,
                                        const GridSpec& grid = {}) {
  return detail::alpha_m_scan(f, iv, alpha, m, grid, detail::NoVisit{});
}

/// Certifies f(lambda x + (1-lambda) y) <= M_r(f(x), f(y); lambda).
/// Throws NonPositiveFunction if f is not positive at a grid point.
inline CheckResult check_r_convex(const Expr& f, const Interval& iv, double r, const GridSpec& grid = {}) {
  grid.validate();
  const auto xs = grid_points(iv.lo, iv.hi, grid.n_xy);
  const auto ts = grid_points(0.0, 1.0, grid.n_lambda);
  const auto fx = detail::eval_all_positive(f, xs);
  return detail::scan_grid(
      grid, xs, ts,
      [&](std::size_t i, std::size_t j, std::size_t l) {
        return PointValues{f(detail::r_arg(xs[i], xs[j], ts[l])), power_mean(fx[i], fx[j], ts[l], r)};
      },
      detail::NoVisit{});
}

/// Certifies |t^a f(x) + m(1-t^a) f(y) - f(tx + m(1-t)y)| <= (same for g, no modulus).
inline CheckResult check_dominated_alpha_m(const Expr& f, const Expr& g, const Interval& iv, double alpha,
                                           double m, const GridSpec& grid = {}) {
  return detail::dominated_alpha_m_scan(f, g, iv, alpha, m, grid, detail::NoVisit{});
}

/// Certifies |M_r(f(x),f(y);l) - f(lx+(1-l)y)| <= M_r(g(x),g(y);l) - g(lx+(1-l)y).
/// Both f and g must be positive on the grid since M_r takes positive arguments.
inline CheckResult check_dominated_r(const Expr& f, const Expr& g, const Interval& iv, double r,
                                     const GridSpec& grid = {}) {
  grid.validate();
  const auto xs = grid_points(iv.lo, iv.hi, grid.n_xy);
  const auto ts = grid_points(0.0, 1.0, grid.n_lambda);
  const auto fx = detail::eval_all_positive(f, xs);
  const auto gx = detail::eval_all_positive(g, xs);
  return detail::scan_grid(
      grid, xs, ts,
      [&](std::size_t i, std::size_t j, std::size_t l) {
        const double u = detail::r_arg(xs[i], xs[j], ts[l]);
        return PointValues{std::fabs(power_mean(fx[i], fx[j], ts[l], r) - f(u)),
                           power_mean(gx[i], gx[j], ts[l], r) - g(u)};
      },
      detail::NoVisit{});
}

/// Dispatches on the class variant.
inline CheckResult check_class(const Expr& f, const Interval& iv, const ClassParams& params,
                               const GridSpec& grid = {}) {
  if (const auto* am = std::get_if<AlphaM>(&params)) return check_alpha_m_convex(f, iv, am->alpha, am->m, grid);
  return check_r_convex(f, iv, std::get<RConvex>(params).r, grid);
}

/// Per-triple violation flags in scan order (index (i*n_xy + j)*n_lambda + l).
inline std::vector<std::uint8_t> violation_mask_alpha_m(const Expr& f, const Interval& iv, double alpha, double m,
                                                        const GridSpec& grid = {}) {
  std::vector<std::uint8_t> mask;
  mask.reserve(grid.points());
  detail::alpha_m_scan(f, iv, alpha, m, grid,
                       [&](std::size_t, std::size_t, std::size_t, bool v) { mask.push_back(v ? 1 : 0); });
  return mask;
}

inline std::vector<std::uint8_t> violation_mask_dominated_alpha_m(const Expr& f, const Expr& g,
                                                                  const Interval& iv, double alpha, double m,
                                                                  const GridSpec& grid = {}) {
  std::vector<std::uint8_t> mask;
  mask.reserve(grid.points());
  detail::dominated_alpha_m_scan(f, g, iv, alpha, m, grid,
                                 [&](std::size_t, std::size_t, std::size_t, bool v) { mask.push_back(v ? 1 : 0); });
  return mask;
}

// Pointwise evaluations, used to reproduce witnesses.

inline PointValues alpha_m_point(const Expr& f, double x, double y, double t, double alpha, double m) {
  const double ta = alpha == 1.0 ? t : std::pow(t, alpha);
  return detail::alpha_m_kernel(f(x), f(y), f(detail::alpha_m_arg(x, y, t, m)), ta, m);
}

inline PointValues dominated_alpha_m_point(const Expr& f, const Expr& g, double x, double y, double t,
                                           double alpha, double m) {
  const double ta = alpha == 1.0 ? t : std::pow(t, alpha);
  const double u = detail::alpha_m_arg(x, y, t, m);
  return detail::dominated_alpha_m_kernel(f(x), f(y), f(u), g(x), g(y), g(u), ta, m);
}

inline PointValues r_convex_point(const Expr& f, double x, double y, double t, double r) {
  return {f(detail::r_arg(x, y, t)), power_mean(detail::positive_value(f, x), detail::positive_value(f, y), t, r)};
}

inline PointValues dominated_r_point(const Expr& f, const Expr& g, double x, double y, double t, double r) {
  const double u = detail::r_arg(x, y, t);
  return {std::fabs(power_mean(detail::positive_value(f, x), detail::positive_value(f, y), t, r) - f(u)),
          power_mean(detail::positive_value(g, x), detail::positive_value(g, y), t, r) - g(u)};
}

struct DominatedPair {
  Expr f;
  Expr g;
};

struct ClassPair {
  Expr h;
  Expr k;
};

/// f = (h - k)/2, g = (h + k)/2.
inline DominatedPair construct_dominated_pair(const Expr& h, const Expr& k) {
  return {lin_comb(0.5, h, -0.5, k), lin_comb(0.5, h, 0.5, k)};
}

/// h = g + f, k = g - f.
inline ClassPair split_pair(const Expr& f, const Expr& g) {
  return {lin_comb(1.0, g, 1.0, f), lin_comb(1.0, g, -1.0, f)};
}

}  // namespace hhkit
