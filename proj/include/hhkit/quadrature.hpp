#pragma once

// Globally adaptive Gauss-Kronrod (7/15) integration. The panel with the
// largest |K15 - G7| estimate is bisected until the summed estimate is
// within tolerance; panels are finally summed left to right so results are
// bit-stable for a given integrand.

#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <vector>
#include <algorithm>

#include "hhkit/expr.hpp"

namespace hhkit {

inline constexpr double kDefaultQuadTol = 1e-10;
inline constexpr std::size_t kMaxPanels = std::size_t{1} << 20;

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntegralResult {
  double value = 0.0;
  double error_bound = 0.0;
  std::size_t subdivisions = 0;  // number of panels in the final partition
};

namespace detail {

// Kronrod abscissae on [-1,1] (positive half, descending); odd indices are
// the Gauss-7 nodes.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo, hi, value, error;
};

template <class F>
Panel gauss_kronrod_panel(const F& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  const double fc = f(c);
  double kronrod = kKronrodWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = h * kKronrodNodes[i];
    const double pair = f(c - dx) + f(c + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  return {lo, hi, kronrod * h, std::fabs((kronrod - gauss) * h)};
}

struct LargerError {
  bool operator()(const Panel& a, const Panel& b) const {
    if (a.error != b.error) return a.error < b.error;
    return a.lo > b.lo;  // ties: leftmost first
  }
};

}  // namespace detail

/// Integrates any callable double(double) over iv; NonConvergence past 2^20 panels.
template <class F>
IntegralResult integrate(const F& f, const Interval& iv, double tol = kDefaultQuadTol) {
  if (!(tol > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
  using detail::Panel;
  std::priority_queue<Panel, std::vector<Panel>, detail::LargerError> queue;
  queue.push(detail::gauss_kronrod_panel(f, iv.lo, iv.hi));
  double total_error = queue.top().error;

  auto ordered_sum = [&](std::vector<Panel>& panels) {
    std::sort(panels.begin(), panels.end(), [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
    IntegralResult r;
    for (const Panel& p : panels) {
      r.value += p.value;
      r.error_bound += p.error;
    }
    r.subdivisions = panels.size();
    return r;
  };

  for (;;) {
    if (total_error <= tol) {
      std::vector<Panel> panels;
      panels.reserve(queue.size());
      auto copy = queue;
      while (!copy.empty()) {
        panels.push_back(copy.top());
        copy.pop();
      }
      IntegralResult r = ordered_sum(panels);
      if (r.error_bound <= tol) return r;
      total_error = r.error_bound;
    }
    if (queue.size() >= kMaxPanels)
      throw NonConvergence("integration did not reach tolerance within 2^20 panels");
    const Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(worst.lo < mid && mid < worst.hi))
      throw NonConvergence("integration panel width reached machine precision");
    const Panel left = detail::gauss_kronrod_panel(f, worst.lo, mid);
    const Panel right = detail::gauss_kronrod_panel(f, mid, worst.hi);
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }
}

inline IntegralResult integrate(const Expr& f, const Interval& iv, double tol = kDefaultQuadTol) {
  return integrate([&f](double x) { return f(x); }, iv, tol);
}

}  // namespace hhkit
