#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <numbers>

#include "hhkit/quadrature.hpp"
#include "test_support.hpp"

namespace hhkit {
namespace {

TEST(Integrate, Examples) {
  const IntegralResult sq = integrate(parse("x^2"), Interval(0.0, 1.0));
  EXPECT_NEAR(sq.value, 1.0 / 3.0, 1e-15);
  EXPECT_LE(sq.error_bound, 1e-12);
  EXPECT_NEAR(integrate(parse("1/x"), Interval(1.0, std::numbers::e)).value, 1.0, 1e-13);
  EXPECT_NEAR(integrate(parse("exp(x)"), Interval(0.0, 1.0)).value, std::numbers::e - 1.0, 1e-14);
}

TEST(Integrate, ErrorBoundCoversTrueError) {
  struct Case {
    const char* f;
    double a, b, exact;
  };
  const Case cases[] = {
      {"sqrt(x)", 0.0, 1.0, 2.0 / 3.0},
      {"1/(1 + 25*x^2)", -1.0, 1.0, 0.4 * std::atan(5.0)},
      {"exp(-x^2)", 0.0, 3.0, 0.5 * std::sqrt(std::numbers::pi) * std::erf(3.0)},
      {"abs(x - 0.3)", 0.0, 1.0, 0.5 * (0.09 + 0.49)},
      {"log(x)", 0.5, 4.0, (4.0 * std::log(4.0) - 4.0) - (0.5 * std::log(0.5) - 0.5)},
  };
  for (const Case& c : cases) {
    for (double tol : {1e-6, 1e-10}) {
      const IntegralResult r = integrate(parse(c.f), Interval(c.a, c.b), tol);
      EXPECT_LE(r.error_bound, tol) << c.f;
      EXPECT_LE(std::fabs(r.value - c.exact), std::max(r.error_bound, 1e-15)) << c.f;
    }
  }
}

TEST(Integrate, RejectsBadToleranceAndPropagatesDomainErrors) {
  EXPECT_THROW(integrate(parse("x"), Interval(0.0, 1.0), 0.0), std::invalid_argument);
  EXPECT_THROW(integrate(parse("log(x - 0.5)"), Interval(0.0, 1.0)), DomainError);
}

TEST(Integrate, NonConvergenceAtPanelCap) {
  // Deterministic noise in [0,1): no panel ever has agreeing Gauss and Kronrod sums.
  auto noise = [](double x) {
    std::uint64_t b;
    std::memcpy(&b, &x, sizeof b);
    return static_cast<double>(Rng::splitmix64(b) >> 11) * 0x1p-53;
  };
  EXPECT_THROW(integrate(noise, Interval(0.0, 1.0), 1e-6), NonConvergence);
}

TEST(Integrate, DeterministicBitForBit) {
  const Expr f = parse("sqrt(abs(x - 0.37)) * exp(x)");
  const IntegralResult a = integrate(f, Interval(0.0, 2.0), 1e-11);
  const IntegralResult b = integrate(f, Interval(0.0, 2.0), 1e-11);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.error_bound, b.error_bound);
  EXPECT_EQ(a.subdivisions, b.subdivisions);
  EXPECT_GT(a.subdivisions, 1u);
}

TEST(IntegrateProperty, PolynomialExactness) {
  Rng rng(42);
  for (int i = 0; i < 200; ++i) {
    const testing::Polynomial p = testing::random_polynomial(rng);
    const double v = integrate(p.to_expr(), Interval(0.0, 1.0)).value;
    EXPECT_LE(std::fabs(v - p.exact_integral(0.0, 1.0)), 1e-10);
  }
}

TEST(IntegrateProperty, Additivity) {
  Rng rng(3);
  const double tol = 1e-10;
  for (int i = 0; i < 100; ++i) {
    const Expr f = testing::random_atom_combination(rng, 4);
    double a = rng.uniform(0.0, 1.0), b = a + rng.uniform(0.1, 1.0), c = b + rng.uniform(0.1, 1.0);
    const double whole = integrate(f, Interval(a, c), tol).value;
    const double parts = integrate(f, Interval(a, b), tol).value + integrate(f, Interval(b, c), tol).value;
    EXPECT_LE(std::fabs(whole - parts), 3 * tol);
  }
}

TEST(IntegrateProperty, Linearity) {
  Rng rng(4);
  const double tol = 1e-10;
  const Interval iv(0.0, 1.5);
  for (int i = 0; i < 100; ++i) {
    const Expr f = testing::random_atom_combination(rng, 4), g = testing::random_atom_combination(rng, 4);
    const double al = rng.uniform(-2.0, 2.0), be = rng.uniform(-2.0, 2.0);
    const double combined = integrate(lin_comb(al, f, be, g), iv, tol).value;
    const double separate = al * integrate(f, iv, tol).value + be * integrate(g, iv, tol).value;
    EXPECT_LE(std::fabs(combined - separate), 3 * tol);
  }
}

}  // namespace
}  // namespace hhkit
