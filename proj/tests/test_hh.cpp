#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "hhkit/hh.hpp"
#include "hhkit/json_io.hpp"
#include "test_support.hpp"

namespace hhkit {
namespace {

constexpr double kE = std::numbers::e;
const Expr kSq = parse("x^2");
const Expr kZero = parse("0");

void expect_report(const IneqReport& r, double lhs, double rhs, double eps = 1e-12) {
  EXPECT_NEAR(r.lhs, lhs, eps) << to_string(r.theorem_id);
  EXPECT_NEAR(r.rhs, rhs, eps) << to_string(r.theorem_id);
  EXPECT_EQ(r.slack, r.rhs - r.lhs);
  EXPECT_EQ(r.holds, r.slack >= -r.tol);
}

TEST(ClassicHH, Examples) {
  auto [l, r] = classic_hh(kSq, 0, 1);
  expect_report(l, 0.25, 1.0 / 3);
  expect_report(r, 1.0 / 3, 0.5);
  EXPECT_TRUE(l.holds && r.holds);
  EXPECT_EQ(l.theorem_id, TheoremId::classic_hh_left);
  auto [l2, r2] = classic_hh(parse("x"), 0, 1);
  EXPECT_NEAR(l2.slack, 0, 1e-14);
  EXPECT_NEAR(r2.slack, 0, 1e-14);
  auto [l3, r3] = classic_hh(parse("exp(x)"), 0, 1);
  expect_report(l3, std::exp(0.5), kE - 1);
  expect_report(r3, kE - 1, (1 + kE) / 2);
}

TEST(MConvexPair, Examples) {
  auto [f1, s1] = dragomir_m(kSq, 0, 1, 1.0);
  expect_report(f1, 0.25, 1.0 / 3);
  expect_report(s1, 1.0 / 3, 0.5);
  auto [f2, s2] = dragomir_m(kSq, 0, 1, 0.5);
  expect_report(f2, 0.25, 0.5);
  expect_report(s2, 0.5, 1.5);
  for (double m : {0.3, 1.0}) {
    auto [a, b] = dragomir_m(kZero, 0, 1, m);
    expect_report(a, 0, 0);
    expect_report(b, 0, 0);
  }
}

TEST(TheoremA, Examples) {
  auto [f1, s1] = theorem_a(kSq, kSq, 0, 1, 0.5);
  expect_report(f1, 0.25, 0.25);
  auto [f2, s2] = theorem_a(kZero, kSq, 0, 1, 1.0);
  expect_report(f2, 0, 1.0 / 12);
  const Expr g = parse("exp(x) + x^3");
  auto [f3, s3] = theorem_a(g, g, 0, 1, 0.75);
  EXPECT_LE(std::fabs(f3.slack), 2 * f3.quad_error + 1e-15);
  EXPECT_LE(std::fabs(s3.slack), 2 * s3.quad_error + 1e-15);
}

TEST(SetMidpoint, Examples) {
  expect_report(set_midpoint(kSq, 0, 1, 1, 1), 0.25, 1.0 / 3);
  expect_report(set_midpoint(kSq, 0, 1, 1, 0.5), 0.25, 0.5);
  const IneqReport c = set_midpoint(parse("1"), 0, 1, 0.5, 1);
  expect_report(c, 1, (1 + (std::sqrt(2.0) - 1)) / std::sqrt(2.0));
  EXPECT_NEAR(c.slack, 0, 1e-14);
}

TEST(SetTrapezoid, Examples) {
  expect_report(set_trapezoid(kSq, 0, 1, 1, 1), 1.0 / 3, 0.5);
  const IneqReport c = set_trapezoid(parse("1"), 0, 1, 0.5, 1);
  expect_report(c, 1, 1);
  expect_report(set_trapezoid(kSq, 0, 1, 1, 0.5), 1.0 / 3, 0.75);
}

TEST(GillR, Examples) {
  const IneqReport e = gill_r(parse("exp(x)"), 0, 1, 0);
  expect_report(e, kE - 1, kE - 1);
  EXPECT_NEAR(e.slack, 0, 1e-12);
  const IneqReport lin = gill_r(parse("x"), 1, 2, 1);
  expect_report(lin, 1.5, 1.5);
  expect_report(gill_r(kSq, 1, 2, 1), 7.0 / 3, 2.5);
  EXPECT_THROW(gill_r(parse("x"), 0, 1, 1), NonPositiveFunction);
}

TEST(T1First, Examples) {
  expect_report(t1_first(kSq, kSq, 0, 1, 1, 1), 1.0 / 12, 1.0 / 12);
  expect_report(t1_first(kZero, kSq, 0, 1, 1, 1), 0, 1.0 / 12);
  const auto fg = construct_dominated_pair(parse("2*x^2"), kSq);
  expect_report(t1_first(fg.f, fg.g, 0, 1, 1, 1), 1.0 / 24, 1.0 / 8);
}

TEST(T1Second, Examples) {
  expect_report(t1_second(kSq, kSq, 0, 1, 1, 1), 1.0 / 6, 1.0 / 6);
  expect_report(t1_second(kZero, kSq, 0, 1, 1, 1), 0, 1.0 / 6);
  expect_report(t1_second(parse("x^2/2"), parse("3*x^2/2"), 0, 1, 1, 1), 1.0 / 12, 0.25);
}

TEST(T2, Examples) {
  expect_report(t2(kSq, kSq, 0, 1, 1, 1), 1.0 / 6, 1.0 / 6);
  expect_report(t2(kZero, kSq, 0, 1, 1, 1), 0, 1.0 / 6);
  const IneqReport r = t2(parse("x^2/2"), parse("3*x^2/2"), 0, 1, 1, 1);
  expect_report(r, 1.0 / 12, 0.25);
  EXPECT_TRUE(r.holds);
}

TEST(GrDominated, Examples) {
  const IneqReport e = gr_dominated(parse("exp(x)"), parse("exp(x)"), 0, 1, 0);
  expect_report(e, 0, 0);
  expect_report(gr_dominated(parse("x + 1"), parse("x + 1"), 0, 1, 1), 0, 0);
  const IneqReport q = gr_dominated(kSq, parse("2*x^2"), 1, 2, 1);
  expect_report(q, 1.0 / 6, 1.0 / 3);
  EXPECT_NEAR(q.slack, 1.0 / 6, 1e-12);
  EXPECT_THROW(gr_dominated(parse("x"), parse("x + 1"), 0, 1, 1), NonPositiveFunction);
}

TEST(Verifiers, ParameterAndDomainErrors) {
  EXPECT_THROW(classic_hh(kSq, 1, 1), std::invalid_argument);
  EXPECT_THROW(set_midpoint(kSq, -1, 1, 1, 1), std::invalid_argument);
  EXPECT_THROW(set_midpoint(kSq, 0, 1, 0, 1), std::invalid_argument);
  EXPECT_THROW(t2(kSq, kSq, 0, 1, 1, 0), std::invalid_argument);
  EXPECT_THROW(t2(kSq, kSq, 0, 1, 1, 1.2), std::invalid_argument);
  EXPECT_THROW(set_trapezoid(parse("log(x)"), 0, 1, 1, 1), DomainError);
}

TEST(Verifiers, HypothesisStatuses) {
  const VerifyOptions checked{1e-8, kDefaultQuadTol, GridSpec{}};
  const IneqReport ok = t2(kZero, kSq, 0, 1, 1, 1, checked);
  ASSERT_EQ(ok.hypothesis.size(), 2u);
  EXPECT_EQ(ok.hypothesis[0].name, "g_alpha_m_convex");
  EXPECT_EQ(ok.hypothesis[0].status, HypothesisStatus::Pass);
  EXPECT_EQ(ok.hypothesis[1].status, HypothesisStatus::Pass);
  // Off-hypothesis inputs still produce both sides.
  const IneqReport bad = t2(kSq, kZero, 0, 1, 1, 1, checked);
  EXPECT_EQ(bad.hypothesis[0].status, HypothesisStatus::Pass);
  EXPECT_EQ(bad.hypothesis[1].status, HypothesisStatus::Violation);
  ASSERT_TRUE(bad.hypothesis[1].witness);
  EXPECT_NEAR(bad.lhs, 1.0 / 6, 1e-12);
  EXPECT_FALSE(bad.holds);
  const IneqReport skipped = t2(kSq, kSq, 0, 1, 1, 1);
  for (const auto& h : skipped.hypothesis) EXPECT_EQ(h.status, HypothesisStatus::Skipped);
  const IneqReport dom = set_midpoint(parse("sqrt(x - 0.1)"), 0.2, 0.5, 1, 1, checked);
  EXPECT_EQ(dom.hypothesis[0].status, HypothesisStatus::DomainError);
  EXPECT_FALSE(dom.hypothesis[0].message.empty());
}

TEST(Verifiers, AlphaOneReducesToTheoremA) {
  Rng rng(21);
  for (int i = 0; i < 50; ++i) {
    const Expr f = testing::random_atom_combination(rng, 3), g = testing::random_atom_combination(rng, 3);
    const double a = rng.uniform(0.0, 1.0), b = a + rng.uniform(0.1, 1.0), m = rng.uniform(0.3, 1.0);
    const auto [ta1, ta2] = theorem_a(f, g, a, b, m);
    const IneqReport u1 = t1_first(f, g, a, b, 1.0, m), u2 = t1_second(f, g, a, b, 1.0, m);
    EXPECT_LE(std::fabs(u1.lhs - ta1.lhs), 1e-12);
    EXPECT_LE(std::fabs(u1.rhs - ta1.rhs), 1e-12);
    EXPECT_LE(std::fabs(u2.lhs - ta2.lhs), 1e-12);
    EXPECT_LE(std::fabs(u2.rhs - ta2.rhs), 1e-12);
  }
}

TEST(Verifiers, T2AgreesWithSplitRoute) {
  Rng rng(22);
  int holds = 0, fails = 0;
  for (int i = 0; i < 100; ++i) {
    const Expr f = testing::random_atom_combination(rng, 3), g = testing::random_atom_combination(rng, 3);
    const double alpha = rng.pick(std::vector<double>{0.5, 1.0}), m = rng.pick(std::vector<double>{0.5, 1.0});
    const IneqReport r = t2(f, g, 0, 1, alpha, m);
    const SplitResiduals lr = t2_split_residuals(f, g, 0, 1, alpha, m);
    EXPECT_EQ(r.holds, lr.holds(r.tol)) << f.to_string() << " | " << g.to_string();
    r.holds ? ++holds : ++fails;
  }
  EXPECT_GT(holds, 0);
  EXPECT_GT(fails, 0);
}

TEST(Verifiers, RhsNonnegativeForCertifiedG) {
  Rng rng(23);
  const GridSpec grid;
  int tested = 0;
  for (int i = 0; i < 30; ++i) {
    const double alpha = rng.pick(std::vector<double>{0.5, 1.0}), m = rng.pick(std::vector<double>{0.5, 1.0});
    const auto g = random_convex_expr(rng, AlphaM{alpha, m}, Interval(0.0, 1.0 / (m * m)), 3, grid);
    if (!g) continue;
    ++tested;
    const Expr f = testing::random_atom_combination(rng, 2);
    EXPECT_GE(t1_first(f, *g, 0, 1, alpha, m).rhs, -1e-8);
    EXPECT_GE(t1_second(f, *g, 0, 1, alpha, m).rhs, -1e-8);
    EXPECT_GE(t2(f, *g, 0, 1, alpha, m).rhs, -1e-8);
    EXPECT_GE(set_midpoint(*g, 0, 1, alpha, m).slack, -1e-8);
    EXPECT_GE(set_trapezoid(*g, 0, 1, alpha, m).slack, -1e-8);
  }
  EXPECT_GT(tested, 10);
}

TEST(Verifiers, DominanceSoundness) {
  Rng rng(24);
  const GridSpec grid;
  int tested = 0;
  for (int i = 0; i < 30; ++i) {
    const double alpha = rng.pick(std::vector<double>{0.5, 1.0}), m = rng.pick(std::vector<double>{0.5, 1.0});
    const Interval cert(0.0, 1.0 / (m * m));
    const auto h = random_convex_expr(rng, AlphaM{alpha, m}, cert, 3, grid);
    const auto k = random_convex_expr(rng, AlphaM{alpha, m}, cert, 3, grid);
    if (!h || !k) continue;
    ++tested;
    const TrialOutcome out = evaluate_alpha_m_pair(*h, *k, 0, 1, alpha, m, {});
    for (const auto& rep : out.reports) {
      if (!rep) continue;
      EXPECT_TRUE(rep->holds) << to_string(rep->theorem_id) << ' ' << out.f << " | " << out.g;
      EXPECT_GE(rep->slack, -1e-8);
    }
  }
  EXPECT_GT(tested, 10);
}

TEST(Verifiers, GrDominatedReflectionSymmetry) {
  Rng rng(25);
  for (int i = 0; i < 30; ++i) {
    const Expr g = parse("exp(x) + 2") + rng.uniform(0.1, 1.0) * pow(Expr::variable(), 2.0);
    const Expr f = 0.5 * g - 0.25;
    const double a = rng.uniform(0.0, 1.0), b = a + rng.uniform(0.2, 1.0), r = rng.uniform(-2.0, 2.0);
    const IneqReport fwd = gr_dominated(f, g, a, b, r);
    const IneqReport rev = gr_dominated(compose_affine(f, -1, a + b), compose_affine(g, -1, a + b), a, b, r);
    EXPECT_NEAR(fwd.lhs, rev.lhs, 1e-10);
    EXPECT_NEAR(fwd.rhs, rev.rhs, 1e-10);
    EXPECT_EQ(fwd.holds, rev.holds);
  }
}

TEST(Names, TheoremIdsRoundTrip) {
  for (TheoremId id : kAllTheorems) EXPECT_EQ(theorem_from_string(to_string(id)), id);
  EXPECT_FALSE(theorem_from_string("t3").has_value());
  EXPECT_TRUE(needs_pair(TheoremId::t2));
  EXPECT_FALSE(needs_pair(TheoremId::gill_r));
}

TEST(ReportJson, KeyOrderAndNumbers) {
  const VerifyOptions checked{1e-8, kDefaultQuadTol, GridSpec{9, 9, 1e-9}};
  const Json j = to_json(t2(kSq, kZero, 0, 1, 1, 1, checked));
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  const std::vector<std::string> want = {"theorem_id", "params", "lhs",        "rhs",       "slack",
                                         "tol",        "holds",  "quad_error", "hypothesis"};
  EXPECT_EQ(keys, want);
  EXPECT_EQ(j["theorem_id"], "t2");
  EXPECT_EQ(j["hypothesis"]["f_g_alpha_m_dominated"]["status"], "violation");
  const std::string text = dump_json(j);
  EXPECT_NE(text.find("0.16666666666666"), std::string::npos);
  EXPECT_EQ(Json::parse(text)["lhs"].get<double>(), j["lhs"].get<double>());
}

}  // namespace
}  // namespace hhkit
