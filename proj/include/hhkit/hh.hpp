#pragma once

// Hermite-Hadamard-type inequality verifiers. Every verifier evaluates both
// sides, reports rhs - lhs as slack, and optionally certifies its
// hypotheses on a grid. Hypothesis failures never stop the computation.

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hhkit/convexity.hpp"
#include "hhkit/expr.hpp"
#include "hhkit/means.hpp"
#include "hhkit/quadrature.hpp"

namespace hhkit {

enum class TheoremId {
  classic_hh_left,
  classic_hh_right,
  dragomir_left,
  dragomir_right,
  theorem_a_first,
  theorem_a_second,
  set_midpoint,
  set_trapezoid,
  gill_r,
  t1_first,
  t1_second,
  t2,
  gr_dominated,
};

inline constexpr std::array<TheoremId, 13> kAllTheorems = {
    TheoremId::classic_hh_left, TheoremId::classic_hh_right, TheoremId::dragomir_left,
    TheoremId::dragomir_right,  TheoremId::theorem_a_first,  TheoremId::theorem_a_second,
    TheoremId::set_midpoint,    TheoremId::set_trapezoid,    TheoremId::gill_r,
    TheoremId::t1_first,        TheoremId::t1_second,        TheoremId::t2,
    TheoremId::gr_dominated};

inline std::string_view to_string(TheoremId id) {
  switch (id) {
    case TheoremId::classic_hh_left: return "classic_hh_left";
    case TheoremId::classic_hh_right: return "classic_hh_right";
    case TheoremId::dragomir_left: return "dragomir_left";
    case TheoremId::dragomir_right: return "dragomir_right";
    case TheoremId::theorem_a_first: return "theorem_a_first";
    case TheoremId::theorem_a_second: return "theorem_a_second";
    case TheoremId::set_midpoint: return "set_midpoint";
    case TheoremId::set_trapezoid: return "set_trapezoid";
    case TheoremId::gill_r: return "gill_r";
    case TheoremId::t1_first: return "t1_first";
    case TheoremId::t1_second: return "t1_second";
    case TheoremId::t2: return "t2";
    case TheoremId::gr_dominated: return "gr_dominated";
  }
  return "";
}

inline std::optional<TheoremId> theorem_from_string(std::string_view s) {
  for (TheoremId id : kAllTheorems)
    if (to_string(id) == s) return id;
  return std::nullopt;
}

/// True for verifiers that take a dominated pair (f, g).
inline bool needs_pair(TheoremId id) {
  switch (id) {
    case TheoremId::theorem_a_first:
    case TheoremId::theorem_a_second:
    case TheoremId::t1_first:
    case TheoremId::t1_second:
    case TheoremId::t2:
    case TheoremId::gr_dominated: return true;
    default: return false;
  }
}

enum class HypothesisStatus { Pass, Violation, Skipped, DomainError };

inline std::string_view to_string(HypothesisStatus s) {
  switch (s) {
    case HypothesisStatus::Pass: return "pass";
    case HypothesisStatus::Violation: return "violation";
    case HypothesisStatus::Skipped: return "skipped";
    case HypothesisStatus::DomainError: return "domain_error";
  }
  return "";
}

struct HypothesisCheck {
  std::string name;  // e.g. "g_alpha_m_convex"
  HypothesisStatus status = HypothesisStatus::Skipped;
  std::optional<Witness> witness;
  std::size_t points_checked = 0;
  std::string message;  // domain error text
};

struct ReportParams {
  double a = 0.0;
  double b = 1.0;
  std::optional<double> alpha;
  std::optional<double> m;
  std::optional<double> r;
};

struct IneqReport {
  TheoremId theorem_id{};
  ReportParams params;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double tol = 1e-8;
  bool holds = true;
  double quad_error = 0.0;
  std::vector<HypothesisCheck> hypothesis;
};

struct VerifyOptions {
  double tol = 1e-8;
  double quad_tol = kDefaultQuadTol;
  std::optional<GridSpec> hypothesis_grid;  // nullopt: hypotheses reported as skipped
};

namespace detail {

inline void validate_ab(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) throw std::invalid_argument("verifier needs a < b");
}

inline void validate_am(double a, double b, double alpha, double m) {
  validate_ab(a, b);
  if (a < 0.0) throw std::invalid_argument("verifier needs 0 <= a");
  validate_alpha_m(alpha, m);
}

// Mean value (1/(b-a)) * integral plus its contribution to the error budget.
struct MeanValue {
  double value;
  double error;
};

inline MeanValue mean_value(const Expr& f, double a, double b, double quad_tol) {
  const IntegralResult r = integrate(f, Interval(a, b), quad_tol);
  return {r.value / (b - a), r.error_bound / (b - a)};
}

inline IneqReport make_report(TheoremId id, ReportParams params, double lhs, double rhs, double quad_error,
                              const VerifyOptions& opts) {
  IneqReport r;
  r.theorem_id = id;
  r.params = params;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.tol = opts.tol;
  r.holds = r.slack >= -opts.tol;
  r.quad_error = quad_error;
  return r;
}

template <class Check>
HypothesisCheck run_hypothesis(std::string name, const VerifyOptions& opts, Check&& check) {
  HypothesisCheck h;
  h.name = std::move(name);
  if (!opts.hypothesis_grid) return h;
  try {
    const CheckResult cr = check(*opts.hypothesis_grid);
    h.points_checked = cr.points_checked;
    h.status = cr.passed() ? HypothesisStatus::Pass : HypothesisStatus::Violation;
    h.witness = cr.witness;
  } catch (const hhkit::DomainError& e) {
    h.status = HypothesisStatus::DomainError;
    h.message = e.what();
  } catch (const NonPositiveFunction& e) {
    h.status = HypothesisStatus::DomainError;
    h.message = e.what();
  }
  return h;
}

inline HypothesisCheck alpha_m_hypothesis(std::string name, const Expr& f, double hi, double alpha, double m,
                                          const VerifyOptions& opts) {
  return run_hypothesis(std::move(name), opts, [&](const GridSpec& grid) {
    return check_alpha_m_convex(f, Interval(0.0, hi), alpha, m, grid);
  });
}

inline HypothesisCheck dominance_hypothesis(std::string name, const Expr& f, const Expr& g, double hi,
                                            double alpha, double m, const VerifyOptions& opts) {
  return run_hypothesis(std::move(name), opts, [&](const GridSpec& grid) {
    return check_dominated_alpha_m(f, g, Interval(0.0, hi), alpha, m, grid);
  });
}

// Integral means used by the m-dependent verifiers.
struct MeansWithScaled {
  MeanValue plain;   // (1/(b-a)) int f(x) dx
  MeanValue scaled;  // (1/(b-a)) int f(x/m) dx
};

inline MeansWithScaled means_with_scaled(const Expr& f, double a, double b, double m, double quad_tol) {
  const MeanValue plain = mean_value(f, a, b, quad_tol);
  if (m == 1.0) return {plain, plain};
  return {plain, mean_value(compose_affine(f, 1.0 / m, 0.0), a, b, quad_tol)};
}

// (I + m(2^a - 1) I_scaled) / 2^a; alpha = 1 gives (I + m I_scaled)/2.
inline double midpoint_integral_form(const MeansWithScaled& mv, double alpha, double m) {
  const double two_a = std::pow(2.0, alpha);
  return (mv.plain.value + m * (two_a - 1.0) * mv.scaled.value) / two_a;
}
inline double midpoint_integral_error(const MeansWithScaled& mv, double alpha, double m) {
  const double two_a = std::pow(2.0, alpha);
  return (mv.plain.error + m * (two_a - 1.0) * mv.scaled.error) / two_a;
}

// (1/2)(f(a) + f(b) + m a f(a/m) + m a f(b/m)) / (a + 1).
inline double trapezoid_form(const Expr& f, double a, double b, double alpha, double m) {
  const double ma = m * alpha;
  return 0.5 * ((f(a) + f(b) + ma * f(a / m) + ma * f(b / m)) / (alpha + 1.0));
}

// (1/2)[(f(a) + m f(a/m))/(a+1) + m a (f(b/m) + m f(b/m^2))/(a+1)].
inline double endpoint_form(const Expr& f, double a, double b, double alpha, double m) {
  return 0.5 * ((f(a) + m * f(a / m)) / (alpha + 1.0) +
                m * alpha * (f(b / m) + m * f(b / (m * m))) / (alpha + 1.0));
}

// (1/2)[(f(a) + m f(a/m))/2 + m (f(b/m) + m f(b/m^2))/2].
inline double dragomir_endpoint_form(const Expr& f, double a, double b, double m) {
  return 0.5 * ((f(a) + m * f(a / m)) / 2.0 + m * ((f(b / m) + m * f(b / (m * m))) / 2.0));
}

inline double positive_at(const Expr& f, double x) { return positive_value(f, x); }

}  // namespace detail

/// f((a+b)/2) <= mean(f) <= (f(a)+f(b))/2 for convex f.
inline std::pair<IneqReport, IneqReport> classic_hh(const Expr& f, double a, double b,
                                                    const VerifyOptions& opts = {}) {
  detail::validate_ab(a, b);
  const detail::MeanValue mean = detail::mean_value(f, a, b, opts.quad_tol);
  const double mid = f(0.5 * (a + b));
  const double trap = 0.5 * (f(a) + f(b));
  const ReportParams p{a, b, std::nullopt, std::nullopt, std::nullopt};
  auto left = detail::make_report(TheoremId::classic_hh_left, p, mid, mean.value, mean.error, opts);
  auto right = detail::make_report(TheoremId::classic_hh_right, p, mean.value, trap, mean.error, opts);
  auto hyp = detail::run_hypothesis("f_convex", opts, [&](const GridSpec& grid) {
    return check_alpha_m_convex(f, Interval(a, b), 1.0, 1.0, grid);
  });
  left.hypothesis = {hyp};
  right.hypothesis = {hyp};
  return {left, right};
}

/// Midpoint and endpoint pair for m-convex f on [0, inf).
inline std::pair<IneqReport, IneqReport> dragomir_m(const Expr& f, double a, double b, double m,
                                                    const VerifyOptions& opts = {}) {
  detail::validate_am(a, b, 1.0, m);
  const auto mv = detail::means_with_scaled(f, a, b, m, opts.quad_tol);
  const double integral = (mv.plain.value + m * mv.scaled.value) / 2.0;
  const double error = (mv.plain.error + m * mv.scaled.error) / 2.0;
  const double mid = f(0.5 * (a + b));
  const double endpoints = detail::dragomir_endpoint_form(f, a, b, m);
  const ReportParams p{a, b, std::nullopt, m, std::nullopt};
  auto first = detail::make_report(TheoremId::dragomir_left, p, mid, integral, error, opts);
  auto second = detail::make_report(TheoremId::dragomir_right, p, integral, endpoints, error, opts);
  auto hyp = detail::alpha_m_hypothesis("f_m_convex", f, b / (m * m), 1.0, m, opts);
  first.hypothesis = {hyp};
  second.hypothesis = {hyp};
  return {first, second};
}

/// The two inequalities for (g,m)-convex dominated f.
inline std::pair<IneqReport, IneqReport> theorem_a(const Expr& f, const Expr& g, double a, double b, double m,
                                                   const VerifyOptions& opts = {}) {
  detail::validate_am(a, b, 1.0, m);
  const auto fm = detail::means_with_scaled(f, a, b, m, opts.quad_tol);
  const auto gm = detail::means_with_scaled(g, a, b, m, opts.quad_tol);
  const double fi = (fm.plain.value + m * fm.scaled.value) / 2.0;
  const double gi = (gm.plain.value + m * gm.scaled.value) / 2.0;
  const double error = (fm.plain.error + m * fm.scaled.error) / 2.0 + (gm.plain.error + m * gm.scaled.error) / 2.0;
  const double mid = 0.5 * (a + b);
  const ReportParams p{a, b, std::nullopt, m, std::nullopt};
  auto first = detail::make_report(TheoremId::theorem_a_first, p, std::fabs(fi - f(mid)), gi - g(mid), error, opts);
  auto second = detail::make_report(TheoremId::theorem_a_second, p,
                                    std::fabs(detail::dragomir_endpoint_form(f, a, b, m) - fi),
                                    detail::dragomir_endpoint_form(g, a, b, m) - gi, error, opts);
  const double hi = b / (m * m);
  std::vector<HypothesisCheck> hyp = {detail::alpha_m_hypothesis("g_m_convex", g, hi, 1.0, m, opts),
                                      detail::dominance_hypothesis("f_g_m_dominated", f, g, hi, 1.0, m, opts)};
  first.hypothesis = hyp;
  second.hypothesis = hyp;
  return {first, second};
}

/// f((a+b)/2) <= mean((f(x) + m(2^a-1) f(x/m)) / 2^a).
inline IneqReport set_midpoint(const Expr& f, double a, double b, double alpha, double m,
                               const VerifyOptions& opts = {}) {
  detail::validate_am(a, b, alpha, m);
  const auto mv = detail::means_with_scaled(f, a, b, m, opts.quad_tol);
  auto rep = detail::make_report(TheoremId::set_midpoint, {a, b, alpha, m, std::nullopt}, f(0.5 * (a + b)),
                                 detail::midpoint_integral_form(mv, alpha, m),
                                 detail::midpoint_integral_error(mv, alpha, m), opts);
  rep.hypothesis = {detail::alpha_m_hypothesis("f_alpha_m_convex", f, b / m, alpha, m, opts)};
  return rep;
}

/// mean(f) <= (1/2)(f(a) + f(b) + m a f(a/m) + m a f(b/m)) / (a + 1).
inline IneqReport set_trapezoid(const Expr& f, double a, double b, double alpha, double m,
                                const VerifyOptions& opts = {}) {
  detail::validate_am(a, b, alpha, m);
  const detail::MeanValue mean = detail::mean_value(f, a, b, opts.quad_tol);
  auto rep = detail::make_report(TheoremId::set_trapezoid, {a, b, alpha, m, std::nullopt}, mean.value,
                                 detail::trapezoid_form(f, a, b, alpha, m), mean.error, opts);
  rep.hypothesis = {detail::alpha_m_hypothesis("f_alpha_m_convex", f, b / m, alpha, m, opts)};
  return rep;
}

/// mean(f) <= L_r(f(a), f(b)) for positive r-convex f.
inline IneqReport gill_r(const Expr& f, double a, double b, double r, const VerifyOptions& opts = {}) {
  detail::validate_ab(a, b);
  const double fa = detail::positive_at(f, a), fb = detail::positive_at(f, b);
  const detail::MeanValue mean = detail::mean_value(f, a, b, opts.quad_tol);
  auto rep = detail::make_report(TheoremId::gill_r, {a, b, std::nullopt, std::nullopt, r}, mean.value,
                                 gen_log_mean(fa, fb, r).value, mean.error, opts);
  rep.hypothesis = {detail::run_hypothesis(
      "f_r_convex", opts, [&](const GridSpec& grid) { return check_r_convex(f, Interval(a, b), r, grid); })};
  return rep;
}

/// Midpoint-type inequality for (g-(alpha,m))-convex dominated f.
inline IneqReport t1_first(const Expr& f, const Expr& g, double a, double b, double alpha, double m,
                           const VerifyOptions& opts = {}) {
  detail::validate_am(a, b, alpha, m);
  const auto fm = detail::means_with_scaled(f, a, b, m, opts.quad_tol);
  const auto gm = detail::means_with_scaled(g, a, b, m, opts.quad_tol);
  const double mid = 0.5 * (a + b);
  auto rep = detail::make_report(
      TheoremId::t1_first, {a, b, alpha, m, std::nullopt},
      std::fabs(detail::midpoint_integral_form(fm, alpha, m) - f(mid)),
      detail::midpoint_integral_form(gm, alpha, m) - g(mid),
      detail::midpoint_integral_error(fm, alpha, m) + detail::midpoint_integral_error(gm, alpha, m), opts);
  const double hi = b / m;
  rep.hypothesis = {detail::alpha_m_hypothesis("g_alpha_m_convex", g, hi, alpha, m, opts),
                    detail::dominance_hypothesis("f_g_alpha_m_dominated", f, g, hi, alpha, m, opts)};
  return rep;
}

/// Endpoint-type inequality for (g-(alpha,m))-convex dominated f.
inline IneqReport t1_second(const Expr& f, const Expr& g, double a, double b, double alpha, double m,
                            const VerifyOptions& opts = {}) {
  detail::validate_am(a, b, alpha, m);
  const auto fm = detail::means_with_scaled(f, a, b, m, opts.quad_tol);
  const auto gm = detail::means_with_scaled(g, a, b, m, opts.quad_tol);
  const double fi = (fm.plain.value + m * fm.scaled.value) / 2.0;
  const double gi = (gm.plain.value + m * gm.scaled.value) / 2.0;
  const double error = (fm.plain.error + m * fm.scaled.error) / 2.0 + (gm.plain.error + m * gm.scaled.error) / 2.0;
  auto rep = detail::make_report(TheoremId::t1_second, {a, b, alpha, m, std::nullopt},
                                 std::fabs(detail::endpoint_form(f, a, b, alpha, m) - fi),
                                 detail::endpoint_form(g, a, b, alpha, m) - gi, error, opts);
  const double hi = b / (m * m);
  rep.hypothesis = {detail::alpha_m_hypothesis("g_alpha_m_convex", g, hi, alpha, m, opts),
                    detail::dominance_hypothesis("f_g_alpha_m_dominated", f, g, hi, alpha, m, opts)};
  return rep;
}

/// Trapezoid-type inequality for (g-(alpha,m))-convex dominated f.
inline IneqReport t2(const Expr& f, const Expr& g, double a, double b, double alpha, double m,
                     const VerifyOptions& opts = {}) {
  detail::validate_am(a, b, alpha, m);
  const detail::MeanValue fmean = detail::mean_value(f, a, b, opts.quad_tol);
  const detail::MeanValue gmean = detail::mean_value(g, a, b, opts.quad_tol);
  auto rep = detail::make_report(TheoremId::t2, {a, b, alpha, m, std::nullopt},
                                 std::fabs(detail::trapezoid_form(f, a, b, alpha, m) - fmean.value),
                                 detail::trapezoid_form(g, a, b, alpha, m) - gmean.value,
                                 fmean.error + gmean.error, opts);
  const double hi = b / m;
  rep.hypothesis = {detail::alpha_m_hypothesis("g_alpha_m_convex", g, hi, alpha, m, opts),
                    detail::dominance_hypothesis("f_g_alpha_m_dominated", f, g, hi, alpha, m, opts)};
  return rep;
}

/// |L_r(f(a),f(b)) - mean(f)| <= L_r(g(a),g(b)) - mean(g) for (g,r)-convex dominated f.
inline IneqReport gr_dominated(const Expr& f, const Expr& g, double a, double b, double r,
                               const VerifyOptions& opts = {}) {
  detail::validate_ab(a, b);
  const double fa = detail::positive_at(f, a), fb = detail::positive_at(f, b);
  const double ga = detail::positive_at(g, a), gb = detail::positive_at(g, b);
  const detail::MeanValue fmean = detail::mean_value(f, a, b, opts.quad_tol);
  const detail::MeanValue gmean = detail::mean_value(g, a, b, opts.quad_tol);
  auto rep = detail::make_report(TheoremId::gr_dominated, {a, b, std::nullopt, std::nullopt, r},
                                 std::fabs(gen_log_mean(fa, fb, r).value - fmean.value),
                                 gen_log_mean(ga, gb, r).value - gmean.value, fmean.error + gmean.error, opts);
  const Interval iv(a, b);
  rep.hypothesis = {
      detail::run_hypothesis("g_r_convex", opts, [&](const GridSpec& grid) { return check_r_convex(g, iv, r, grid); }),
      detail::run_hypothesis("f_g_r_dominated", opts,
                             [&](const GridSpec& grid) { return check_dominated_r(f, g, iv, r, grid); })};
  return rep;
}

/// Second route to t2: residuals of the trapezoid inequality for g + f and g - f.
/// t2 holds exactly when both residuals are >= -tol.
struct SplitResiduals {
  double sum;   // trapezoid_form(g+f) - mean(g+f)
  double diff;  // trapezoid_form(g-f) - mean(g-f)
  bool holds(double tol) const noexcept { return sum >= -tol && diff >= -tol; }
};

inline SplitResiduals t2_split_residuals(const Expr& f, const Expr& g, double a, double b, double alpha, double m,
                                         const VerifyOptions& opts = {}) {
  const ClassPair hk = split_pair(f, g);
  const IneqReport plus = set_trapezoid(hk.h, a, b, alpha, m, VerifyOptions{opts.tol, opts.quad_tol, std::nullopt});
  const IneqReport minus = set_trapezoid(hk.k, a, b, alpha, m, VerifyOptions{opts.tol, opts.quad_tol, std::nullopt});
  return {plus.slack, minus.slack};
}

}  // namespace hhkit
