#include "blowup/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "blowup/error.hpp"
#include "json.hpp"

namespace blowup {

// Insertion order keeps the documented field order in the output.
using json = nlohmann::ordered_json;

namespace {

std::string number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// nlohmann prints the shortest round-trip form; the output format promises
// 17 significant digits, so the tree is printed here instead.
void dump(std::ostream& os, const json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << json(it.key()).dump() << ": ";
        dump(os, it.value(), indent, depth + 1);
      }
      os << "\n" << close_pad << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      const bool flat = std::none_of(j.begin(), j.end(), [](const json& e) { return e.is_structured(); });
      if (flat) {
        os << "[";
        bool first = true;
        for (const auto& e : j) {
          if (!first) os << ", ";
          first = false;
          dump(os, e, indent, depth + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << ",\n";
        first = false;
        os << pad;
        dump(os, e, indent, depth + 1);
      }
      os << "\n" << close_pad << "]";
      return;
    }
    case json::value_t::number_float:
      os << number(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

std::string render(const json& j) {
  std::ostringstream os;
  dump(os, j, 2, 0);
  os << "\n";
  return os.str();
}

json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

json spec_json(const PotentialSpec& spec) {
  json j = json::object();
  if (spec.beta) j["beta"] = num(*spec.beta);
  if (!spec.builtin.empty()) j["builtin"] = spec.builtin;
  if (!spec.expr.empty()) j["expr"] = spec.expr;
  json params = json::object();
  for (const auto& [k, v] : spec.params) params[k] = num(v);
  j["params"] = params;
  if (spec.domain) j["domain"] = json::array({num(spec.domain->first), num(spec.domain->second)});
  return j;
}

json certificate_json(const Certificate& c) {
  json j = json::object();
  j["conclusion"] = std::string(to_string(c.conclusion));
  j["kind"] = std::string(to_string(c.kind));
  j["statement"] = c.statement();
  j["beta"] = num(c.beta);
  if (c.triple) {
    j["triple"] = json::array({num((*c.triple)[0]), num((*c.triple)[1]), num((*c.triple)[2])});
  } else {
    j["triple"] = nullptr;
  }
  json reps = json::array();
  for (const AssumptionReport& r : c.reports) {
    reps.push_back({{"index", r.index},
                    {"satisfied", r.satisfied},
                    {"margin", num(r.margin)},
                    {"boundary", r.boundary},
                    {"detail", r.detail}});
  }
  j["assumptions"] = reps;
  j["potential"] = spec_json(c.potential);
  j["expression"] = c.expression;
  if (c.kind == CertificateKind::Complexified) {
    j["complex_analyticity_asserted"] = c.complex_analyticity_asserted;
  }
  return j;
}

json equilibrium_json(const Equilibrium& e) {
  return {{"theta_c", num(e.theta_c)},
          {"sign", e.sign > 0 ? "+" : "-"},
          {"v_star", num(e.v_star)},
          {"lambda1", num(e.lambda1)},
          {"lambda23",
           json::array({json::array({num(e.lambda23[0].real()), num(e.lambda23[0].imag())}),
                        json::array({num(e.lambda23[1].real()), num(e.lambda23[1].imag())})})},
          {"type", std::string(to_string(e.type))}};
}

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::SchemaViolation, path + ": " + what);
}

double require_number(const json& j, const std::string& path) {
  if (!j.is_number()) schema(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) schema(path, "expected a finite number");
  return x;
}

}  // namespace

std::string to_json(const PotentialSpec& spec) { return render(spec_json(spec)); }

std::string to_json(const Certificate& cert) { return render(certificate_json(cert)); }

std::string to_json(const SweepResult& result) {
  json j = json::object();
  j["param"] = result.param;
  json grid = json::array();
  for (const SweepSample& s : result.grid) {
    json row = json::array({num(s.value)});
    if (s.conclusion) {
      row.push_back(std::string(to_string(*s.conclusion)));
      // The kind only qualifies a positive verdict.
      if (s.kind && *s.conclusion == Conclusion::NonIntegrable) {
        row.push_back(std::string(to_string(*s.kind)));
      }
    } else {
      row.push_back(nullptr);
      row.push_back(s.error);
    }
    grid.push_back(row);
  }
  j["grid"] = grid;
  json th = json::array();
  json brackets = json::array();
  for (const Threshold& t : result.thresholds) {
    th.push_back(num(t.value));
    brackets.push_back(json::array({num(t.lo), num(t.hi)}));
  }
  j["thresholds"] = th;
  j["brackets"] = brackets;
  return render(j);
}

std::string to_json(const EquilibriaReport& report) {
  json j = json::object();
  json eqs = json::array();
  for (const Equilibrium& e : report.equilibria) eqs.push_back(equilibrium_json(e));
  j["equilibria"] = eqs;
  json skipped = json::array();
  for (const CriticalPoint& cp : report.skipped) {
    skipped.push_back({{"theta_c", num(cp.theta)},
                       {"V", num(cp.V)},
                       {"note", "V(theta_c) >= 0: no equilibrium on the collision manifold"}});
  }
  j["skipped"] = skipped;
  return render(j);
}

std::string to_json(const std::vector<MrComparison>& entries) {
  json arr = json::array();
  for (const MrComparison& m : entries) {
    json e = {{"theta_c", num(m.coefficient.theta_c)},
              {"lambda", num(m.coefficient.lambda)},
              {"trivial_coefficient", num(m.coefficient.trivial)}};
    if (m.coefficient.darboux_scale) e["darboux_scale"] = num(*m.coefficient.darboux_scale);
    e["necessary_inequality"] = {{"satisfied", m.necessary.satisfied},
                                 {"margin", num(m.necessary.margin)}};
    if (m.mr_member) e["mr_beta_minus1_member"] = *m.mr_member;
    arr.push_back(e);
  }
  return render(json{{"critical_points", arr}});
}

std::string to_json(const ManifoldTrace& t) {
  json j = json::object();
  j["source"] = equilibrium_json(t.source);
  j["target"] = equilibrium_json(t.target);
  j["seed"] = json::array({num(t.seed.theta), num(t.seed.v), num(t.seed.w)});
  j["termination"] = std::string(to_string(t.trajectory.termination));
  j["terminal_distance"] = num(t.trajectory.terminal_distance);
  j["min_distance"] = num(t.min_distance);
  j["swept_angle"] = num(t.swept_angle);
  j["swept_angle_near"] = num(t.swept_angle_near);
  j["spiral"] = t.spiral;
  j["samples"] = t.trajectory.samples.size();
  return render(j);
}

PotentialSpec parse_spec(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    schema("$", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) schema("$", "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k != "beta" && k != "expr" && k != "builtin" && k != "params" && k != "domain") {
      schema("$." + k, "unknown field");
    }
  }
  PotentialSpec spec;
  if (!j.contains("beta")) schema("$.beta", "required field missing");
  spec.beta = require_number(j["beta"], "$.beta");
  const bool has_expr = j.contains("expr");
  const bool has_builtin = j.contains("builtin");
  if (has_expr == has_builtin) schema("$", "exactly one of \"expr\" and \"builtin\" is required");
  if (has_expr) {
    if (!j["expr"].is_string()) schema("$.expr", "expected a string");
    spec.expr = j["expr"].get<std::string>();
  } else {
    if (!j["builtin"].is_string()) schema("$.builtin", "expected a string");
    spec.builtin = j["builtin"].get<std::string>();
  }
  if (j.contains("params")) {
    const json& p = j["params"];
    if (!p.is_object()) schema("$.params", "expected an object");
    for (auto it = p.begin(); it != p.end(); ++it) {
      spec.params[it.key()] = require_number(it.value(), "$.params." + it.key());
    }
  }
  if (j.contains("domain")) {
    const json& d = j["domain"];
    if (!d.is_array() || d.size() != 2) schema("$.domain", "expected [a, b]");
    spec.domain = std::make_pair(require_number(d[0], "$.domain[0]"),
                                 require_number(d[1], "$.domain[1]"));
  }
  return spec;
}

PotentialSpec load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "cannot read '" + path + "'");
  return parse_spec(buf.str());
}

void apply_override(PotentialSpec& spec, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw Error(ErrorCode::InvalidArgument, "expected name=value, got '" + std::string(assignment) + "'");
  }
  const std::string name(assignment.substr(0, eq));
  const std::string_view value = assignment.substr(eq + 1);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(x)) {
    throw Error(ErrorCode::InvalidArgument, "'" + std::string(value) + "' is not a number");
  }
  spec.params[name] = x;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "tau,t,r,theta,v,w,z,h\n";
  char buf[8 * 32];
  for (const TrajectorySample& s : traj.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.tau, s.t,
                  s.r, s.theta, s.v, s.w, s.z, s.h);
    os << buf;
  }
}

}  // namespace blowup
