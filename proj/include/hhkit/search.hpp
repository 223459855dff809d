#pragma once

// Randomized instance generation by rejection sampling, bulk stress
// verification over dominated pairs, and parameter tightness scans.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hhkit/convexity.hpp"
#include "hhkit/expr.hpp"
#include "hhkit/hh.hpp"
#include "hhkit/json_io.hpp"

namespace hhkit {

inline constexpr std::size_t kMaxCandidateAttempts = 50;

/// Deterministic 64-bit generator with a platform-independent uniform draw.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent substream for (seed, index).
  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(seed ^ splitmix64(index + 0x9e3779b97f4a7c15ULL)));
  }

  std::uint64_t next() { return engine_(); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

  template <class T>
  const T& pick(const std::vector<T>& pool) {
    return pool[index(pool.size())];
  }

  static std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

struct RejectionStats {
  std::size_t drawn = 0;
  std::size_t rejected = 0;
};

namespace detail {

// Coefficients on a 1e-3 lattice keep printed expressions short.
inline double coefficient(Rng& rng, double lo, double hi) {
  return std::max(lo, std::round(rng.uniform(lo, hi) * 1000.0) / 1000.0);
}

inline Expr sum_atoms(const std::vector<Expr>& atoms) {
  Expr e = atoms.front();
  for (std::size_t i = 1; i < atoms.size(); ++i) e = e + atoms[i];
  return e;
}

inline Expr alpha_m_candidate(Rng& rng, const AlphaM& p, std::size_t budget) {
  const Expr x = Expr::variable();
  const std::size_t kinds = p.m == 1.0 ? 4 : 3;  // positive constants only when m = 1
  const std::size_t n = 1 + rng.index(budget);
  std::vector<Expr> atoms;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = coefficient(rng, 0.1, 2.0);
    switch (rng.index(kinds)) {
      case 0: atoms.push_back(c * pow(x, 1.0 + 0.5 * static_cast<double>(rng.index(7)))); break;
      case 1: atoms.push_back(c * (exp(x) - 1.0)); break;
      case 2: atoms.push_back(c * x); break;
      default: atoms.push_back(Expr::constant(c)); break;
    }
  }
  return sum_atoms(atoms);
}

inline Expr r_convex_candidate(Rng& rng, const RConvex& p, const Interval& iv, std::size_t budget) {
  const Expr x = Expr::variable();
  std::vector<Expr> atoms{Expr::constant(coefficient(rng, 0.5, 2.0))};
  const std::size_t n = rng.index(budget + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = coefficient(rng, 0.1, 2.0);
    switch (rng.index(p.r >= 1.0 ? 4 : 2)) {
      case 0: atoms.push_back(c * exp(coefficient(rng, -1.0, 1.0) * x)); break;
      case 1: {
        const double pole = iv.hi + coefficient(rng, 0.5, 2.0);
        atoms.push_back(Expr::constant(c) / (Expr::constant(pole) - x));
        break;
      }
      case 2:
        if (iv.lo >= 0.0) atoms.push_back(c * pow(x, 1.0 + 0.5 * static_cast<double>(rng.index(7))));
        else atoms.push_back(c * exp(x));
        break;
      default: atoms.push_back(c * x + Expr::constant(c * std::max(0.0, -iv.lo))); break;
    }
  }
  return sum_atoms(atoms);
}

inline bool certifies(const Expr& e, const ClassParams& params, const Interval& iv, const GridSpec& grid) {
  try {
    return check_class(e, iv, params, grid).passed();
  } catch (const hhkit::DomainError&) {
    return false;
  } catch (const NonPositiveFunction&) {
    return false;
  }
}

}  // namespace detail

/// Draws sums of in-class-plausible atoms and returns the first candidate that
/// certifies on `grid`; nullopt after 50 rejected attempts.
inline std::optional<Expr> random_convex_expr(Rng& rng, const ClassParams& params, const Interval& iv,
                                              std::size_t budget, const GridSpec& grid = {},
                                              RejectionStats* stats = nullptr) {
  if (budget < 1) throw std::invalid_argument("atom budget must be >= 1");
  for (std::size_t attempt = 0; attempt < kMaxCandidateAttempts; ++attempt) {
    const Expr candidate = std::holds_alternative<AlphaM>(params)
                               ? detail::alpha_m_candidate(rng, std::get<AlphaM>(params), budget)
                               : detail::r_convex_candidate(rng, std::get<RConvex>(params), iv, budget);
    if (stats) ++stats->drawn;
    if (detail::certifies(candidate, params, iv, grid)) return candidate;
    if (stats) ++stats->rejected;
  }
  return std::nullopt;
}

struct StressConfig {
  std::uint64_t seed = 0;
  std::size_t trials = 100;
  std::vector<Interval> intervals{Interval(0.0, 1.0)};
  std::vector<double> alphas{1.0};
  std::vector<double> ms{1.0};
  std::vector<double> rs;
  std::size_t atom_budget = 3;
  GridSpec grid;
  double tol = 1e-8;

  void validate() const {
    if (trials < 1) throw std::invalid_argument("stress needs trials >= 1");
    if (intervals.empty()) throw std::invalid_argument("interval pool is empty");
    if (alphas.empty() != ms.empty()) throw std::invalid_argument("alpha and m pools must both be set or both empty");
    if (alphas.empty() && rs.empty()) throw std::invalid_argument("no class pool configured");
    if (atom_budget < 1) throw std::invalid_argument("atom budget must be >= 1");
    for (double a : alphas)
      if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("alpha pool values must lie in (0,1]");
    for (double m : ms)
      if (!(m > 0.0 && m <= 1.0)) throw std::invalid_argument("m pool values must lie in (0,1]");
    if (!alphas.empty())
      for (const Interval& iv : intervals)
        if (iv.lo < 0.0) throw std::invalid_argument("(alpha,m) trials need intervals with lo >= 0");
    grid.validate();
  }
};

struct VerifierTally {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t skipped = 0;
  std::optional<double> min_slack;
};

struct WorstCase {
  std::size_t trial = 0;
  IneqReport report;
  std::string f;
  std::string g;
};

struct StressSummary {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t rejected_trials = 0;
  RejectionStats candidates;
  std::array<VerifierTally, kAllTheorems.size()> tallies{};
  std::optional<WorstCase> worst;

  const VerifierTally& tally(TheoremId id) const { return tallies[static_cast<std::size_t>(id)]; }
  std::size_t total_failures() const {
    std::size_t n = 0;
    for (const auto& t : tallies) n += t.fail;
    return n;
  }
};

/// Verifier outcomes for one trial; nullopt marks a skipped verifier.
struct TrialOutcome {
  std::array<std::optional<IneqReport>, kAllTheorems.size()> reports{};
  std::string f;
  std::string g;
  bool rejected = false;
};

namespace detail {

template <class Fn>
void record(TrialOutcome& out, TheoremId id, Fn&& fn) {
  try {
    out.reports[static_cast<std::size_t>(id)] = fn();
  } catch (const hhkit::DomainError&) {
  } catch (const NonPositiveFunction&) {
  } catch (const NonConvergence&) {
  }
}

template <class Fn>
void record_pair(TrialOutcome& out, TheoremId first, TheoremId second, Fn&& fn) {
  try {
    auto [a, b] = fn();
    out.reports[static_cast<std::size_t>(first)] = a;
    out.reports[static_cast<std::size_t>(second)] = b;
  } catch (const hhkit::DomainError&) {
  } catch (const NonPositiveFunction&) {
  } catch (const NonConvergence&) {
  }
}

}  // namespace detail

/// Runs every verifier applicable to (alpha, m) on h (single-function
/// inequalities) and on the pair f = (h-k)/2, g = (h+k)/2.
inline TrialOutcome evaluate_alpha_m_pair(const Expr& h, const Expr& k, double a, double b, double alpha, double m,
                                          const VerifyOptions& opts) {
  TrialOutcome out;
  const DominatedPair p = construct_dominated_pair(h, k);
  out.f = p.f.to_string();
  out.g = p.g.to_string();
  if (alpha == 1.0 && m == 1.0)
    detail::record_pair(out, TheoremId::classic_hh_left, TheoremId::classic_hh_right,
                        [&] { return classic_hh(h, a, b, opts); });
  if (alpha == 1.0) {
    detail::record_pair(out, TheoremId::dragomir_left, TheoremId::dragomir_right,
                        [&] { return dragomir_m(h, a, b, m, opts); });
    detail::record_pair(out, TheoremId::theorem_a_first, TheoremId::theorem_a_second,
                        [&] { return theorem_a(p.f, p.g, a, b, m, opts); });
  }
  detail::record(out, TheoremId::set_midpoint, [&] { return set_midpoint(h, a, b, alpha, m, opts); });
  detail::record(out, TheoremId::set_trapezoid, [&] { return set_trapezoid(h, a, b, alpha, m, opts); });
  detail::record(out, TheoremId::t1_first, [&] { return t1_first(p.f, p.g, a, b, alpha, m, opts); });
  detail::record(out, TheoremId::t1_second, [&] { return t1_second(p.f, p.g, a, b, alpha, m, opts); });
  detail::record(out, TheoremId::t2, [&] { return t2(p.f, p.g, a, b, alpha, m, opts); });
  return out;
}

/// r-family verifiers: gill_r on g and gr_dominated on (f, g), each only when
/// its hypotheses certify on `grid`.
inline TrialOutcome evaluate_r_pair(const Expr& f, const Expr& g, double a, double b, double r,
                                    const GridSpec& grid, const VerifyOptions& opts) {
  TrialOutcome out;
  out.f = f.to_string();
  out.g = g.to_string();
  const Interval iv(a, b);
  const bool g_ok = detail::certifies(g, RConvex{r}, iv, grid);
  bool dominated = false;
  if (g_ok) {
    try {
      dominated = check_dominated_r(f, g, iv, r, grid).passed();
    } catch (const hhkit::DomainError&) {
    } catch (const NonPositiveFunction&) {
    }
  }
  if (g_ok) detail::record(out, TheoremId::gill_r, [&] { return gill_r(g, a, b, r, opts); });
  if (dominated) detail::record(out, TheoremId::gr_dominated, [&] { return gr_dominated(f, g, a, b, r, opts); });
  return out;
}

namespace detail {

inline TrialOutcome alpha_m_trial(Rng& rng, const StressConfig& cfg, RejectionStats& stats) {
  const Interval& iv = rng.pick(cfg.intervals);
  const double alpha = rng.pick(cfg.alphas);
  const double m = rng.pick(cfg.ms);
  // The verifiers evaluate up to b/m^2.
  const Interval cert(0.0, iv.hi / (m * m));
  const ClassParams params = AlphaM{alpha, m};
  const auto h = random_convex_expr(rng, params, cert, cfg.atom_budget, cfg.grid, &stats);
  const auto k = h ? random_convex_expr(rng, params, cert, cfg.atom_budget, cfg.grid, &stats) : std::nullopt;
  if (!h || !k) {
    TrialOutcome out;
    out.rejected = true;
    return out;
  }
  return evaluate_alpha_m_pair(*h, *k, iv.lo, iv.hi, alpha, m, VerifyOptions{cfg.tol, kDefaultQuadTol, std::nullopt});
}

inline TrialOutcome r_trial(Rng& rng, const StressConfig& cfg, RejectionStats& stats) {
  const Interval& iv = rng.pick(cfg.intervals);
  const double r = rng.pick(cfg.rs);
  const ClassParams params = RConvex{r};
  auto h = random_convex_expr(rng, params, iv, cfg.atom_budget, cfg.grid, &stats);
  const auto k = h ? random_convex_expr(rng, params, iv, cfg.atom_budget, cfg.grid, &stats) : std::nullopt;
  TrialOutcome rejected;
  rejected.rejected = true;
  if (!h || !k) return rejected;
  // Lift h above k with a constant so that f = (h-k)/2 is positive on the grid.
  double min_gap = INFINITY;
  for (double x : grid_points(iv.lo, iv.hi, cfg.grid.n_xy)) min_gap = std::min(min_gap, (*h)(x) - (*k)(x));
  if (min_gap < 0.1) {
    h = *h + (0.1 - min_gap);
    if (!certifies(*h, params, iv, cfg.grid)) return rejected;
  }
  const DominatedPair p = construct_dominated_pair(*h, *k);
  return evaluate_r_pair(p.f, p.g, iv.lo, iv.hi, r, cfg.grid, VerifyOptions{cfg.tol, kDefaultQuadTol, std::nullopt});
}

inline void merge(StressSummary& s, const TrialOutcome& out, std::size_t trial, const std::vector<TheoremId>& family) {
  for (TheoremId id : family) {
    VerifierTally& t = s.tallies[static_cast<std::size_t>(id)];
    const auto& rep = out.reports[static_cast<std::size_t>(id)];
    if (!rep) {
      ++t.skipped;
      continue;
    }
    rep->holds ? ++t.pass : ++t.fail;
    t.min_slack = t.min_slack ? std::min(*t.min_slack, rep->slack) : rep->slack;
    if (!rep->holds && (!s.worst || rep->slack < s.worst->report.slack))
      s.worst = WorstCase{trial, *rep, out.f, out.g};
  }
}

}  // namespace detail

/// Runs cfg.trials independent trials; trial i uses the RNG substream (seed, i).
inline StressSummary stress(const StressConfig& cfg) {
  cfg.validate();
  StressSummary s;
  s.seed = cfg.seed;
  s.trials = cfg.trials;
  const std::vector<TheoremId> am_family = {
      TheoremId::classic_hh_left, TheoremId::classic_hh_right, TheoremId::dragomir_left, TheoremId::dragomir_right,
      TheoremId::theorem_a_first, TheoremId::theorem_a_second, TheoremId::set_midpoint,  TheoremId::set_trapezoid,
      TheoremId::t1_first,        TheoremId::t1_second,        TheoremId::t2};
  const std::vector<TheoremId> r_family = {TheoremId::gill_r, TheoremId::gr_dominated};
  for (std::size_t i = 0; i < cfg.trials; ++i) {
    Rng rng = Rng::substream(cfg.seed, i);
    bool rejected = false;
    if (!cfg.alphas.empty()) {
      const TrialOutcome out = detail::alpha_m_trial(rng, cfg, s.candidates);
      rejected = rejected || out.rejected;
      detail::merge(s, out, i, am_family);
    } else {
      for (TheoremId id : am_family) ++s.tallies[static_cast<std::size_t>(id)].skipped;
    }
    if (!cfg.rs.empty()) {
      const TrialOutcome out = detail::r_trial(rng, cfg, s.candidates);
      rejected = rejected || out.rejected;
      detail::merge(s, out, i, r_family);
    } else {
      for (TheoremId id : r_family) ++s.tallies[static_cast<std::size_t>(id)].skipped;
    }
    if (rejected) ++s.rejected_trials;
  }
  return s;
}

inline Json to_json(const StressSummary& s) {
  Json j;
  j["seed"] = s.seed;
  j["trials"] = s.trials;
  j["rejected_trials"] = s.rejected_trials;
  j["candidates_drawn"] = s.candidates.drawn;
  j["candidates_rejected"] = s.candidates.rejected;
  Json verifiers = Json::object();
  for (TheoremId id : kAllTheorems) {
    const VerifierTally& t = s.tally(id);
    Json v;
    v["pass"] = t.pass;
    v["fail"] = t.fail;
    v["skipped"] = t.skipped;
    v["min_slack"] = t.min_slack ? Json(*t.min_slack) : Json(nullptr);
    verifiers[std::string(to_string(id))] = v;
  }
  j["verifiers"] = verifiers;
  if (s.worst) {
    Json w;
    w["trial"] = s.worst->trial;
    w["f"] = s.worst->f;
    w["g"] = s.worst->g;
    w["report"] = to_json(s.worst->report);
    j["worst"] = w;
  } else {
    j["worst"] = nullptr;
  }
  return j;
}

struct ScanRow {
  double alpha;
  double m;
  TheoremId theorem;
  std::optional<double> slack;  // nullopt: skipped after a domain error
  std::optional<bool> holds;
};

/// Slack of the pair verifiers over an (alpha, m) grid; theorem_a rows only at alpha = 1.
inline std::vector<ScanRow> tightness_scan(const Expr& f, const Expr& g, const Interval& iv,
                                           const std::vector<double>& alphas, const std::vector<double>& ms,
                                           const VerifyOptions& opts = {}) {
  std::vector<ScanRow> rows;
  auto add = [&](double alpha, double m, TheoremId id, auto&& fn) {
    ScanRow row{alpha, m, id, std::nullopt, std::nullopt};
    try {
      const IneqReport rep = fn();
      row.slack = rep.slack;
      row.holds = rep.holds;
    } catch (const hhkit::DomainError&) {
    } catch (const NonConvergence&) {
    }
    rows.push_back(row);
  };
  const VerifyOptions plain{opts.tol, opts.quad_tol, std::nullopt};
  for (double alpha : alphas) {
    for (double m : ms) {
      if (alpha == 1.0) {
        std::optional<std::pair<IneqReport, IneqReport>> ta;
        auto both = [&]() -> const std::pair<IneqReport, IneqReport>& {
          if (!ta) ta = theorem_a(f, g, iv.lo, iv.hi, m, plain);
          return *ta;
        };
        add(alpha, m, TheoremId::theorem_a_first, [&] { return both().first; });
        add(alpha, m, TheoremId::theorem_a_second, [&] { return both().second; });
      }
      add(alpha, m, TheoremId::t1_first, [&] { return t1_first(f, g, iv.lo, iv.hi, alpha, m, plain); });
      add(alpha, m, TheoremId::t1_second, [&] { return t1_second(f, g, iv.lo, iv.hi, alpha, m, plain); });
      add(alpha, m, TheoremId::t2, [&] { return t2(f, g, iv.lo, iv.hi, alpha, m, plain); });
    }
  }
  return rows;
}

/// CSV with header alpha,m,theorem,slack,holds; skipped rows have an empty slack.
inline void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  os << "alpha,m,theorem,slack,holds\n";
  for (const ScanRow& r : rows) {
    os << num(r.alpha) << ',' << num(r.m) << ',' << to_string(r.theorem) << ',' << (r.slack ? num(*r.slack) : "")
       << ',' << (r.holds ? (*r.holds ? "true" : "false") : "skipped") << '\n';
  }
}

inline Json to_json(const std::vector<ScanRow>& rows) {
  Json arr = Json::array();
  for (const ScanRow& r : rows) {
    Json j;
    j["alpha"] = r.alpha;
    j["m"] = r.m;
    j["theorem"] = std::string(to_string(r.theorem));
    j["slack"] = r.slack ? Json(*r.slack) : Json(nullptr);
    j["holds"] = r.holds ? Json(*r.holds) : Json("skipped");
    arr.push_back(j);
  }
  return arr;
}

}  // namespace hhkit
