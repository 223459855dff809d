#pragma once

// Power mean M_r(x, y; lambda) and generalized logarithmic mean L_r(x, y)
// for positive arguments, evaluated in forms that stay accurate next to
// the removable singularities r = 0 and r = -1.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string_view>

namespace hhkit {

inline constexpr double kOrderThreshold = 1e-9;      // |r| (or |r+1|) below this selects the limit branch
inline constexpr double kDiagonalThreshold = 1e-12;  // relative |x-y| below this selects x = y

struct MeanBranch {
  enum class Tag { GeneralR, LogMean, HarmonicLog, Diagonal };
  Tag tag;
  double value;
};

inline std::string_view to_string(MeanBranch::Tag t) {
  switch (t) {
    case MeanBranch::Tag::GeneralR: return "general";
    case MeanBranch::Tag::LogMean: return "log_mean";
    case MeanBranch::Tag::HarmonicLog: return "harmonic_log";
    case MeanBranch::Tag::Diagonal: return "diagonal";
  }
  return "";
}

namespace detail {
inline void require_positive(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
    throw std::invalid_argument("mean requires finite positive arguments");
}
}  // namespace detail

/// (lambda x^r + (1-lambda) y^r)^(1/r), or x^lambda y^(1-lambda) for |r| < 1e-9.
inline double power_mean(double x, double y, double lambda, double r) {
  detail::require_positive(x, y);
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("power mean weight outside [0,1]");
  if (!std::isfinite(r)) throw std::invalid_argument("power mean order must be finite");
  if (x == y || lambda == 1.0) return x;
  if (lambda == 0.0) return y;
  if (std::fabs(r) < kOrderThreshold) return std::clamp(std::pow(x, lambda) * std::pow(y, 1.0 - lambda), std::min(x, y), std::max(x, y));

  if (std::fabs(r) >= 0.01) {
    const double direct = std::pow(lambda * std::pow(x, r) + (1.0 - lambda) * std::pow(y, r), 1.0 / r);
    if (std::isfinite(direct) && direct > 0.0) return std::clamp(direct, std::min(x, y), std::max(x, y));
  }
  // Factor out the argument with the larger r*log so both exponentials are <= 1,
  // then use expm1/log1p so the r -> 0 limit does not cancel.
  const double lx = std::log(x), ly = std::log(y);
  const double pivot = (r * lx >= r * ly) ? lx : ly;
  const double s = lambda * std::expm1(r * (lx - pivot)) + (1.0 - lambda) * std::expm1(r * (ly - pivot));
  const double v = std::exp(pivot + std::log1p(s) / r);
  return std::clamp(v, std::min(x, y), std::max(x, y));
}

/// Generalized logarithmic mean with branches r = 0, r = -1, x = y, and general r.
inline MeanBranch gen_log_mean(double x, double y, double r) {
  detail::require_positive(x, y);
  if (!std::isfinite(r)) throw std::invalid_argument("logarithmic mean order must be finite");
  // Canonical order hi >= lo makes the result exactly symmetric.
  const double hi = std::max(x, y), lo = std::min(x, y);
  if (hi - lo <= kDiagonalThreshold * hi) return {MeanBranch::Tag::Diagonal, 0.5 * (hi + lo)};

  // hi - lo is exact for nearby arguments; log1p keeps d accurate next to the diagonal.
  const double d = std::log1p((hi - lo) / lo);
  double v;
  MeanBranch::Tag tag;
  if (std::fabs(r) < kOrderThreshold) {
    tag = MeanBranch::Tag::LogMean;
    v = (hi - lo) / d;
  } else if (std::fabs(r + 1.0) < kOrderThreshold) {
    tag = MeanBranch::Tag::HarmonicLog;
    v = hi * lo * d / (hi - lo);
  } else {
    tag = MeanBranch::Tag::GeneralR;
    // r/(r+1) (hi^(r+1) - lo^(r+1)) / (hi^r - lo^r), rewritten with expm1.
    if (r > 0.0)
      v = r / (r + 1.0) * hi * std::expm1(-(r + 1.0) * d) / std::expm1(-r * d);
    else
      v = r / (r + 1.0) * lo * std::expm1((r + 1.0) * d) / std::expm1(r * d);
  }
  return {tag, std::clamp(v, lo, hi)};
}

}  // namespace hhkit
