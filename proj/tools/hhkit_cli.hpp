#pragma once

// Command-line front end. Exit codes: 0 holds/passed, 1 violation found,
// 2 usage, parse or domain error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hhkit/hhkit.hpp"

namespace hhkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitError = 2;

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct Common {
  bool json = false;
  bool csv = false;
  std::optional<double> tol;
  std::size_t grid_xy = GridSpec{}.n_xy;
  std::size_t grid_lambda = GridSpec{}.n_lambda;
};

inline void add_output_flags(CLI::App* sub, Common& c) {
  sub->add_flag("--json", c.json, "Machine-readable JSON output");
}

inline void add_grid_flags(CLI::App* sub, Common& c) {
  sub->add_option("--grid-xy", c.grid_xy, "Number of x/y grid samples")->check(CLI::Range(2, 1 << 16));
  sub->add_option("--grid-lambda", c.grid_lambda, "Number of lambda samples")->check(CLI::Range(3, 1 << 16));
}

inline GridSpec grid_from(const Common& c, double default_tol = GridSpec{}.tol) {
  return GridSpec{c.grid_xy, c.grid_lambda, c.tol.value_or(default_tol)};
}

inline void print_witness(std::ostream& out, const Witness& w) {
  out << "violation: x=" << num(w.x) << " y=" << num(w.y) << " t=" << num(w.lambda) << " lhs=" << num(w.lhs)
      << " rhs=" << num(w.rhs) << " gap=" << num(w.gap) << '\n';
}

inline void print_check(std::ostream& out, const CheckResult& r) {
  if (r.witness) {
    print_witness(out, *r.witness);
    out << r.violations << " of " << r.points_checked << " grid points violate the condition\n";
  } else {
    out << "pass: no violation on " << r.points_checked << " grid points\n";
  }
  if (r.origin_nonpositive) out << "f(0) <= 0: " << (*r.origin_nonpositive ? "yes" : "no") << '\n';
}

inline Json grid_json(const GridSpec& g) {
  Json j;
  j["n_xy"] = g.n_xy;
  j["n_lambda"] = g.n_lambda;
  j["tol"] = g.tol;
  return j;
}

inline void print_report(std::ostream& out, const IneqReport& r) {
  out << to_string(r.theorem_id) << ": lhs=" << num(r.lhs) << " rhs=" << num(r.rhs) << " slack=" << num(r.slack)
      << " (tol " << num(r.tol) << ", quad error " << num(r.quad_error) << ") " << (r.holds ? "HOLDS" : "FAILS")
      << '\n';
  for (const auto& h : r.hypothesis) {
    out << "  hypothesis " << h.name << ": " << to_string(h.status);
    if (h.witness)
      out << " at x=" << num(h.witness->x) << " y=" << num(h.witness->y) << " t=" << num(h.witness->lambda)
          << " gap=" << num(h.witness->gap);
    if (!h.message.empty()) out << " (" << h.message << ")";
    out << '\n';
  }
}

inline StressConfig load_stress_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  const nlohmann::json j = nlohmann::json::parse(in);
  StressConfig cfg;
  cfg.seed = j.value("seed", cfg.seed);
  cfg.trials = j.value("trials", cfg.trials);
  if (j.contains("intervals")) {
    cfg.intervals.clear();
    for (const auto& iv : j.at("intervals")) cfg.intervals.emplace_back(iv.at(0).get<double>(), iv.at(1).get<double>());
  }
  cfg.alphas = j.value("alphas", cfg.alphas);
  cfg.ms = j.value("ms", cfg.ms);
  cfg.rs = j.value("rs", cfg.rs);
  cfg.atom_budget = j.value("atom_budget", cfg.atom_budget);
  cfg.tol = j.value("tol", cfg.tol);
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    cfg.grid.n_xy = g.value("n_xy", cfg.grid.n_xy);
    cfg.grid.n_lambda = g.value("n_lambda", cfg.grid.n_lambda);
    cfg.grid.tol = g.value("tol", cfg.grid.tol);
  }
  return cfg;
}

}  // namespace detail

/// Parses argv (argv[0] is the program name) and runs one subcommand.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"Certify generalized convexity and verify Hermite-Hadamard-type inequalities"};
  app.require_subcommand(1);
  Common c;

  // means
  std::string kind = "power";
  double mx = 0, my = 0, mr = 0;
  std::optional<double> mlambda;
  auto* means = app.add_subcommand("means", "Evaluate a power mean or a generalized logarithmic mean");
  means->add_option("--kind", kind, "power | logmean")->check(CLI::IsMember({"power", "logmean"}));
  means->add_option("--x", mx)->required();
  means->add_option("--y", my)->required();
  means->add_option("--lambda", mlambda, "Weight of x (power mean)");
  means->add_option("--r", mr, "Order")->required();
  add_output_flags(means, c);

  // integrate
  std::string fs, gs;
  double a = 0, b = 1;
  auto* integ = app.add_subcommand("integrate", "Adaptive Gauss-Kronrod integral of f over [a,b]");
  integ->add_option("--f", fs, "Integrand")->required();
  integ->add_option("--a", a)->required();
  integ->add_option("--b", b)->required();
  integ->add_option("--tol", c.tol, "Absolute error tolerance");
  add_output_flags(integ, c);

  // check-convexity / check-dominance
  std::optional<double> alpha, m, r;
  auto add_class_flags = [&](CLI::App* sub) {
    auto* oa = sub->add_option("--alpha", alpha, "alpha in (0,1]");
    auto* om = sub->add_option("--m", m, "m in (0,1]");
    auto* orr = sub->add_option("--r", r, "r-convexity order");
    orr->excludes(oa)->excludes(om);
    sub->add_option("--tol", c.tol, "Absolute tolerance on the pointwise gap");
    add_grid_flags(sub, c);
    add_output_flags(sub, c);
  };
  auto* conv = app.add_subcommand("check-convexity", "Grid-certify (alpha,m)- or r-convexity of f");
  conv->add_option("--f", fs)->required();
  conv->add_option("--a", a)->required();
  conv->add_option("--b", b)->required();
  add_class_flags(conv);
  auto* dom = app.add_subcommand("check-dominance", "Grid-certify that f is convex dominated by g");
  dom->add_option("--f", fs)->required();
  dom->add_option("--g", gs)->required();
  dom->add_option("--a", a)->required();
  dom->add_option("--b", b)->required();
  add_class_flags(dom);

  // verify
  std::string theorem;
  auto* ver = app.add_subcommand("verify", "Evaluate both sides of one inequality");
  ver->add_option("theorem", theorem, "Theorem id")
      ->required()
      ->check(CLI::Validator(
          [](std::string& s) {
            return theorem_from_string(s) ? std::string() : "unknown theorem id '" + s + "'";
          },
          "THEOREM_ID"));
  ver->add_option("--f", fs)->required();
  ver->add_option("--g", gs);
  ver->add_option("--a", a)->required();
  ver->add_option("--b", b)->required();
  ver->add_option("--alpha", alpha);
  ver->add_option("--m", m);
  ver->add_option("--r", r);
  ver->add_option("--tol", c.tol, "Slack tolerance");
  add_grid_flags(ver, c);
  add_output_flags(ver, c);

  // stress
  std::string config_path;
  std::uint64_t seed = 0;
  std::size_t trials = 100;
  std::vector<double> alphas, ms, rs;
  std::optional<double> sa, sb;
  auto* st = app.add_subcommand("stress", "Random dominated pairs checked against every applicable verifier");
  st->add_option("--config", config_path, "JSON stress configuration")->check(CLI::ExistingFile);
  st->add_option("--seed", seed);
  st->add_option("--trials", trials)->check(CLI::PositiveNumber);
  st->add_option("--a", sa);
  st->add_option("--b", sb);
  st->add_option("--alpha", alphas, "alpha pool")->delimiter(',');
  st->add_option("--m", ms, "m pool")->delimiter(',');
  st->add_option("--r", rs, "r pool")->delimiter(',');
  st->add_option("--tol", c.tol, "Slack tolerance");
  add_grid_flags(st, c);
  add_output_flags(st, c);

  // scan
  auto* sc = app.add_subcommand("scan", "Slack of the pair verifiers over an (alpha, m) grid");
  sc->add_option("--f", fs)->required();
  sc->add_option("--g", gs)->required();
  sc->add_option("--a", a)->required();
  sc->add_option("--b", b)->required();
  sc->add_option("--alpha", alphas, "alpha values")->delimiter(',')->required();
  sc->add_option("--m", ms, "m values")->delimiter(',')->required();
  sc->add_option("--tol", c.tol, "Slack tolerance");
  sc->add_flag("--csv", c.csv, "CSV output");
  add_output_flags(sc, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  try {
    if (means->parsed()) {
      Json j;
      j["kind"] = kind;
      j["x"] = mx;
      j["y"] = my;
      double value;
      if (kind == "power") {
        if (!mlambda) throw std::invalid_argument("--lambda is required for the power mean");
        value = power_mean(mx, my, *mlambda, mr);
        j["lambda"] = *mlambda;
        j["r"] = mr;
      } else {
        const MeanBranch br = gen_log_mean(mx, my, mr);
        value = br.value;
        j["r"] = mr;
        j["branch"] = std::string(to_string(br.tag));
      }
      j["value"] = value;
      if (c.json) out << dump_json(j) << '\n';
      else out << num(value) << '\n';
      return kExitOk;
    }

    if (integ->parsed()) {
      const Expr f = parse(fs);
      const double tol = c.tol.value_or(kDefaultQuadTol);
      const IntegralResult res = integrate(f, Interval(a, b), tol);
      if (c.json) {
        Json j;
        j["f"] = fs;
        j["a"] = a;
        j["b"] = b;
        j["tol"] = tol;
        j["value"] = res.value;
        j["error_bound"] = res.error_bound;
        j["subdivisions"] = res.subdivisions;
        out << dump_json(j) << '\n';
      } else {
        out << num(res.value) << " +/- " << num(res.error_bound) << " (" << res.subdivisions << " panels)\n";
      }
      return kExitOk;
    }

    if (conv->parsed() || dom->parsed()) {
      const bool dominance = dom->parsed();
      const Expr f = parse(fs);
      const std::optional<Expr> g = dominance ? std::optional<Expr>(parse(gs)) : std::nullopt;
      const GridSpec grid = grid_from(c);
      const Interval iv(a, b);
      Json params;
      CheckResult res;
      std::string check;
      if (r) {
        params["r"] = *r;
        check = dominance ? "dominated_r" : "r_convex";
        res = dominance ? check_dominated_r(f, *g, iv, *r, grid) : check_r_convex(f, iv, *r, grid);
      } else {
        const double al = alpha.value_or(1.0), mm = m.value_or(1.0);
        params["alpha"] = al;
        params["m"] = mm;
        check = dominance ? "dominated_alpha_m" : "alpha_m_convex";
        res = dominance ? check_dominated_alpha_m(f, *g, iv, al, mm, grid) : check_alpha_m_convex(f, iv, al, mm, grid);
      }
      if (c.json) {
        Json j;
        j["check"] = check;
        j["f"] = fs;
        if (dominance) j["g"] = gs;
        j["a"] = a;
        j["b"] = b;
        j["params"] = params;
        j["grid"] = grid_json(grid);
        const Json body = to_json(res);
        for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = *it;
        out << dump_json(j) << '\n';
      } else {
        print_check(out, res);
      }
      return res.passed() ? kExitOk : kExitViolation;
    }

    if (ver->parsed()) {
      const auto id = theorem_from_string(theorem);
      if (!id) throw std::invalid_argument("unknown theorem id '" + theorem + "'");
      const Expr f = parse(fs);
      std::optional<Expr> g;
      if (needs_pair(*id)) {
        if (gs.empty()) throw std::invalid_argument("--g is required for " + theorem);
        g = parse(gs);
      }
      auto need = [&](const std::optional<double>& v, const char* flag) {
        if (!v) throw std::invalid_argument(std::string(flag) + " is required for " + theorem);
        return *v;
      };
      VerifyOptions opts;
      opts.tol = c.tol.value_or(opts.tol);
      opts.hypothesis_grid = grid_from(c, GridSpec{}.tol);
      IneqReport rep;
      switch (*id) {
        case TheoremId::classic_hh_left: rep = classic_hh(f, a, b, opts).first; break;
        case TheoremId::classic_hh_right: rep = classic_hh(f, a, b, opts).second; break;
        case TheoremId::dragomir_left: rep = dragomir_m(f, a, b, need(m, "--m"), opts).first; break;
        case TheoremId::dragomir_right: rep = dragomir_m(f, a, b, need(m, "--m"), opts).second; break;
        case TheoremId::theorem_a_first: rep = theorem_a(f, *g, a, b, need(m, "--m"), opts).first; break;
        case TheoremId::theorem_a_second: rep = theorem_a(f, *g, a, b, need(m, "--m"), opts).second; break;
        case TheoremId::set_midpoint: rep = set_midpoint(f, a, b, need(alpha, "--alpha"), need(m, "--m"), opts); break;
        case TheoremId::set_trapezoid:
          rep = set_trapezoid(f, a, b, need(alpha, "--alpha"), need(m, "--m"), opts);
          break;
        case TheoremId::gill_r: rep = gill_r(f, a, b, need(r, "--r"), opts); break;
        case TheoremId::t1_first: rep = t1_first(f, *g, a, b, need(alpha, "--alpha"), need(m, "--m"), opts); break;
        case TheoremId::t1_second: rep = t1_second(f, *g, a, b, need(alpha, "--alpha"), need(m, "--m"), opts); break;
        case TheoremId::t2: rep = t2(f, *g, a, b, need(alpha, "--alpha"), need(m, "--m"), opts); break;
        case TheoremId::gr_dominated: rep = gr_dominated(f, *g, a, b, need(r, "--r"), opts); break;
      }
      if (c.json) out << dump_json(to_json(rep)) << '\n';
      else print_report(out, rep);
      return rep.holds ? kExitOk : kExitViolation;
    }

    if (st->parsed()) {
      StressConfig cfg = config_path.empty() ? StressConfig{} : load_stress_config(config_path);
      if (config_path.empty() || st->count("--seed")) cfg.seed = seed;
      if (config_path.empty() || st->count("--trials")) cfg.trials = trials;
      if (sa || sb) cfg.intervals = {Interval(sa.value_or(0.0), sb.value_or(1.0))};
      if (!rs.empty()) {
        cfg.rs = rs;
        if (alphas.empty() && ms.empty()) cfg.alphas.clear(), cfg.ms.clear();
      }
      if (!alphas.empty()) cfg.alphas = alphas;
      if (!ms.empty()) cfg.ms = ms;
      if (!alphas.empty() && ms.empty() && cfg.ms.empty()) cfg.ms = {1.0};
      if (!ms.empty() && alphas.empty() && cfg.alphas.empty()) cfg.alphas = {1.0};
      if (c.tol) cfg.tol = *c.tol;
      if (st->count("--grid-xy")) cfg.grid.n_xy = c.grid_xy;
      if (st->count("--grid-lambda")) cfg.grid.n_lambda = c.grid_lambda;
      const StressSummary s = stress(cfg);
      if (c.json) {
        out << dump_json(to_json(s)) << '\n';
      } else {
        out << "trials " << s.trials << ", rejected " << s.rejected_trials << " (candidates drawn "
            << s.candidates.drawn << ", rejected " << s.candidates.rejected << ")\n";
        for (TheoremId id : kAllTheorems) {
          const VerifierTally& t = s.tally(id);
          out << "  " << to_string(id) << ": pass " << t.pass << " fail " << t.fail << " skipped " << t.skipped;
          if (t.min_slack) out << " min slack " << num(*t.min_slack);
          out << '\n';
        }
        if (s.worst)
          out << "worst: trial " << s.worst->trial << ' ' << to_string(s.worst->report.theorem_id) << " slack "
              << num(s.worst->report.slack) << " f=" << s.worst->f << " g=" << s.worst->g << '\n';
      }
      return s.total_failures() == 0 ? kExitOk : kExitViolation;
    }

    if (sc->parsed()) {
      VerifyOptions opts;
      opts.tol = c.tol.value_or(opts.tol);
      const auto rows = tightness_scan(parse(fs), parse(gs), Interval(a, b), alphas, ms, opts);
      if (c.csv) {
        write_scan_csv(out, rows);
      } else if (c.json) {
        out << dump_json(to_json(rows)) << '\n';
      } else {
        for (const ScanRow& row : rows)
          out << "alpha=" << num(row.alpha) << " m=" << num(row.m) << ' ' << to_string(row.theorem) << " slack="
              << (row.slack ? num(*row.slack) : "-") << ' '
              << (row.holds ? (*row.holds ? "holds" : "FAILS") : "skipped") << '\n';
      }
      bool all = true;
      for (const ScanRow& row : rows) all = all && row.holds.value_or(true);
      return all ? kExitOk : kExitViolation;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"hhkit"};
  for (const auto& s : args) argv.push_back(s.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace hhkit::cli
