#pragma once

// JSON views of reports and check results. Keys keep insertion order and
// floating-point numbers are written with 17 significant digits, so the
// output is byte-stable and round-trips every double exactly.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hhkit/convexity.hpp"
#include "hhkit/hh.hpp"

namespace hhkit {

using Json = nlohmann::ordered_json;

inline void write_json(std::ostream& os, const Json& j, int indent = 2, int depth = 0) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad << Json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write_json(os, it.value(), indent, depth + 1);
      }
      os << nl << close_pad << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[' << nl;
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad;
        write_json(os, v, indent, depth + 1);
      }
      os << nl << close_pad << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        os << "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << buf;
      return;
    }
    default: os << j.dump(); return;
  }
}

inline std::string dump_json(const Json& j, int indent = 2) {
  std::ostringstream os;
  write_json(os, j, indent);
  return os.str();
}

inline Json to_json(const Witness& w) {
  Json j;
  j["x"] = w.x;
  j["y"] = w.y;
  j["lambda"] = w.lambda;
  j["lhs"] = w.lhs;
  j["rhs"] = w.rhs;
  j["gap"] = w.gap;
  return j;
}

inline Json to_json(const CheckResult& r) {
  Json j;
  j["verdict"] = r.passed() ? "pass" : "violation";
  j["points_checked"] = r.points_checked;
  j["violations"] = r.violations;
  j["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
  if (r.origin_nonpositive) j["origin_nonpositive"] = *r.origin_nonpositive;
  return j;
}

inline Json to_json(const ReportParams& p) {
  Json j;
  j["a"] = p.a;
  j["b"] = p.b;
  if (p.alpha) j["alpha"] = *p.alpha;
  if (p.m) j["m"] = *p.m;
  if (p.r) j["r"] = *p.r;
  return j;
}

inline Json to_json(const HypothesisCheck& h) {
  Json j;
  j["status"] = std::string(to_string(h.status));
  j["points_checked"] = h.points_checked;
  if (h.witness) j["witness"] = to_json(*h.witness);
  if (!h.message.empty()) j["message"] = h.message;
  return j;
}

/// {theorem_id, params, lhs, rhs, slack, tol, holds, quad_error, hypothesis}
inline Json to_json(const IneqReport& r) {
  Json j;
  j["theorem_id"] = std::string(to_string(r.theorem_id));
  j["params"] = to_json(r.params);
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["slack"] = r.slack;
  j["tol"] = r.tol;
  j["holds"] = r.holds;
  j["quad_error"] = r.quad_error;
  Json hyp = Json::object();
  for (const auto& h : r.hypothesis) hyp[h.name] = to_json(h);
  j["hypothesis"] = hyp;
  return j;
}

}  // namespace hhkit
