// Command-line front end: plan, data, realize, verify, sweep, emit-singular.
// run() is the whole program minus main(), so tests can drive it with an
// argument vector and captured streams.
#pragma once

#include "lnpencil/eisenstein_param.hpp"
#include "lnpencil/pencil_data.hpp"
#include "lnpencil/realize.hpp"
#include "lnpencil/serialize.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace lnpencil::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kVerifyFailed = 3, kCapRefused = 4, kIo = 5 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Accepts "inf", or a sum of signed terms like "-2+8*t", "-2+8t", "t", "3".
inline EisensteinParam parse_param(std::string s) {
  std::erase_if(s, [](unsigned char c) { return std::isspace(c); });
  if (s == "inf" || s == "infinity") return EisensteinParam::infinity();
  if (s.empty()) throw UsageError("empty parameter");
  std::int64_t m = 0, n = 0;
  std::size_t pos = 0;
  bool first = true;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (!first) {
      throw UsageError("expected + or - in '" + s + "'");
    }
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    std::optional<std::int64_t> coef;
    if (pos > start) {
      if (pos - start > 15) throw UsageError("coefficient too large in '" + s + "'");
      coef = std::stoll(s.substr(start, pos - start));
    }
    bool is_tau = false;
    if (pos < s.size() && s[pos] == '*') {
      if (!coef) throw UsageError("dangling '*' in '" + s + "'");
      ++pos;
      if (pos >= s.size() || s[pos] != 't') throw UsageError("expected t after '*' in '" + s + "'");
    }
    if (pos < s.size() && s[pos] == 't') {
      is_tau = true;
      ++pos;
    }
    if (!coef && !is_tau) throw UsageError("cannot parse parameter '" + s + "'");
    const std::int64_t v = sign * coef.value_or(1);
    (is_tau ? n : m) += v;
    first = false;
  }
  try {
    return EisensteinParam(m, n);
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
}

inline std::vector<CremonaStep> parse_steps(const std::string& s) {
  std::vector<CremonaStep> out;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '[' || c == ']') continue;
    if (c < '0' || c > '3') throw UsageError("step codes are 0..3, got '" + s + "'");
    out.push_back(step_from_code(c - '0'));
  }
  return out;
}

inline BasePencil parse_base(const std::string& s) {
  if (s == "F1" || s == "f1" || s == "1") return BasePencil::F1;
  if (s == "Finf" || s == "finf" || s == "inf") return BasePencil::FInf;
  throw UsageError("base must be F1 or Finf");
}

struct ParamArgs {
  std::optional<std::int64_t> m, n;
  std::optional<std::string> t;
  std::optional<std::string> steps;
  std::optional<std::string> base;

  void attach(CLI::App* cmd, bool allow_steps) {
    cmd->add_option("-m", m, "rational part of t = m + n*tau");
    cmd->add_option("-n", n, "tau part of t = m + n*tau");
    cmd->add_option("--t", t, "parameter as text, e.g. '-2+8t' or 'inf'");
    if (allow_steps) {
      cmd->add_option("--steps", steps, "explicit step codes (0=Q_inf 1=Q_1 2=Q_tau 3=Q_tau2), e.g. 0,1,3,2");
      cmd->add_option("--base", base, "base pencil for --steps: F1 or Finf (default Finf)");
    }
  }

  std::optional<EisensteinParam> param() const {
    if (t && (m || n)) throw UsageError("give either --t or -m/-n, not both");
    if (t) return parse_param(*t);
    if (m || n) {
      try {
        return EisensteinParam(m.value_or(0), n.value_or(0));
      } catch (const std::domain_error& e) {
        throw UsageError(e.what());
      }
    }
    return std::nullopt;
  }

  // The planner's plan, or the explicit one; an explicit plan must replay
  // to the given parameter when both are present.
  DescentPlan plan() const {
    auto p = param();
    if (!steps) {
      if (!p) throw UsageError("a parameter is required (-m/-n or --t)");
      return plan_descent(*p);
    }
    DescentPlan dp{EisensteinParam::infinity(), parse_steps(*steps), base ? parse_base(*base) : BasePencil::FInf};
    auto reached = EisensteinParam::from_rational(replay_plan(dp));
    if (p) {
      if (!reached || !(*reached == *p)) {
        throw UsageError("steps replay to " + replay_plan(dp).to_string() + ", not " + p->to_string());
      }
    }
    if (!reached) throw UsageError("steps replay to a non-integral parameter " + replay_plan(dp).to_string());
    dp.t = *reached;
    return dp;
  }
};

inline std::string join_codes(const std::vector<CremonaStep>& steps, const char* sep = ", ") {
  std::string s;
  for (std::size_t k = 0; k < steps.size(); ++k) s += (k ? sep : "") + std::to_string(step_code(steps[k]));
  return s;
}

// ---------------------------------------------------------------------------

inline int cmd_plan(const ParamArgs& a, const std::string& format, std::ostream& out) {
  const DescentPlan p = a.plan();
  if (format == "json") {
    nlohmann::ordered_json j;
    j["steps"] = step_codes(p.steps);
    j["base"] = std::string(base_name(p.base));
    out << j.dump() << "\n";
    return kOk;
  }
  out << "t: " << p.t.to_string() << "\n";
  out << "base: " << base_name(p.base) << "\n";
  out << "steps (" << p.steps.size() << "): [" << join_codes(p.steps) << "]\n";
  std::string names;
  for (auto s : p.steps) names += (names.empty() ? "" : " ") + std::string(step_name(s));
  out << "maps: " << names << "\n";
  return kOk;
}

inline int cmd_data(const ParamArgs& a, bool trace, const std::string& format, std::ostream& out) {
  const DataResult dr = data_for_plan(a.plan());
  if (format == "json") {
    json j{{"data", data_to_json(dr.data)}, {"steps", dr.plan.steps.size()}};
    if (trace) {
      json tr = json::array();
      for (const auto& d : dr.trace) tr.push_back(data_to_json(d));
      j["trace"] = std::move(tr);
    }
    out << j.dump() << "\n";
    return kOk;
  }
  if (trace) {
    for (const auto& d : dr.trace) out << d.to_string() << "\n";
    if (dr.trace.empty()) out << dr.data.to_string() << "\n";
  } else {
    out << dr.data.to_string() << "\n";
  }
  return kOk;
}

struct CheckSelection {
  bool multiplicities = true, foliation = true, special = true;
};

inline CheckSelection parse_checks(const std::string& s) {
  CheckSelection c{false, false, false};
  if (s == "none") return c;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "multiplicities") {
      c.multiplicities = true;
    } else if (item == "foliation") {
      c.foliation = true;
    } else if (item == "special") {
      c.special = true;
    } else if (item == "all") {
      c = {};
    } else {
      throw UsageError("unknown check '" + item + "'");
    }
  }
  return c;
}

inline void print_report_text(const VerificationReport& v, std::ostream& out) {
  out << "data invariants: " << (v.data.passed() ? "pass" : "FAIL") << "\n";
  if (v.multiplicities) {
    out << "multiplicities: " << (v.multiplicities->passed ? "pass" : "FAIL") << "\n";
    for (const auto& p : v.multiplicities->points) {
      const auto& ap = arrangement().points[p.point_index];
      out << "  " << ap.point.to_string() << " " << triple_name(ap.triple) << ": generic " << p.generic
          << ", expected " << p.expected << ", min(F,G) " << p.generators_min << "\n";
    }
  }
  if (v.foliation) out << "foliation: " << (*v.foliation ? "pass" : "FAIL") << "\n";
  if (v.special) {
    out << "special members: " << (v.special->passed ? "pass" : "FAIL") << " (" << v.special->members.size()
        << " found, Darboux degree " << v.special->darboux_degree << ")\n";
    for (const auto& s : v.special->members) {
      out << "  (" << s.c1.to_string() << " : " << s.c2.to_string() << ") lines";
      for (const auto& l : s.lines) out << " " << l;
      out << ", residual degree " << s.residual.degree() << (s.residual_cube_root ? " (cube)" : " (not a cube)")
          << "\n";
    }
  }
}

inline int cmd_realize(const ParamArgs& a, std::int64_t cap, const std::string& format, const std::string& checks,
                       std::ostream& out, std::ostream& err) {
  const DescentPlan plan = a.plan();
  const CheckSelection sel = parse_checks(checks);
  RealizeOptions opt;
  opt.degree_cap = cap;
  opt.multiplicities = sel.multiplicities;
  opt.foliation = sel.foliation;
  opt.special = sel.special;
  std::optional<RealizationResult> realized;
  try {
    realized = realize_plan(plan, opt);
  } catch (const DegreeCapExceeded& e) {
    err << "refused: predicted degree " << e.predicted_degree() << " exceeds --max-degree " << e.cap() << "\n";
    return kCapRefused;
  }
  const RealizationResult& r = *realized;
  if (format == "json") {
    out << realization_to_json(r).dump() << "\n";
  } else if (format == "latex") {
    out << "% t = " << r.t.to_string() << ", data " << r.data.to_string() << "\n";
    out << "F = " << to_latex(r.generators.F) << "\n\n";
    out << "G = " << to_latex(r.generators.G) << "\n";
  } else {
    out << "t: " << r.t.to_string() << "\n";
    out << "steps: [" << join_codes(r.plan.steps) << "] from " << base_name(r.plan.base) << "\n";
    out << "data: " << r.data.to_string() << "\n";
    out << "F = " << r.generators.F.to_string() << "\n";
    out << "G = " << r.generators.G.to_string() << "\n";
    print_report_text(r.verification, out);
  }
  if (!r.verification.passed()) {
    if (format != "text") print_report_text(r.verification, err);
    return kVerifyFailed;
  }
  return kOk;
}

inline int verify_records(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "cannot read " << path << "\n";
    return kIo;
  }
  std::string line;
  std::size_t lineno = 0, bad = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const CatalogRecord r = record_from_json(json::parse(line));
      const RecordCheck c = verify_record(r);
      if (!c.passed()) {
        ++bad;
        out << "line " << lineno << ": record for (" << r.m << ", " << r.n << ") FAILS"
            << (c.plan_matches ? "" : " [plan]") << (c.data_matches ? "" : " [data]")
            << (c.invariants_hold ? "" : " [invariants]") << (c.flag_consistent ? "" : " [flag]")
            << (c.degree_consistent ? "" : " [degree]") << "\n";
      }
    } catch (const std::exception& e) {
      ++bad;
      out << "line " << lineno << ": unreadable record: " << e.what() << "\n";
    }
  }
  out << lineno << " lines, " << bad << " failing\n";
  return bad ? kVerifyFailed : kOk;
}

inline int cmd_verify(const ParamArgs& a, const std::string& level, const std::optional<std::string>& record,
                      std::int64_t cap, std::ostream& out, std::ostream& err) {
  if (record) return verify_records(*record, out, err);
  const DescentPlan plan = a.plan();
  if (level == "data") {
    const DataResult dr = data_for_plan(plan);
    const DataInvariantReport rep = check_data_invariants(dr.data);
    bool replay_ok = replay_plan(plan) == plan.t.to_rational();
    out << dr.data.to_string() << "\n";
    out << "bezout: " << (rep.bezout ? "pass" : "FAIL") << "\n";
    out << "genus one: " << (rep.genus_one ? "pass" : "FAIL") << "\n";
    out << "degree mod 3: " << (rep.degree_mod3 ? "pass" : "FAIL") << "\n";
    out << "replay: " << (replay_ok ? "pass" : "FAIL") << "\n";
    return rep.passed() && replay_ok ? kOk : kVerifyFailed;
  }
  RealizeOptions opt;
  opt.degree_cap = cap;
  if (level == "multiplicities") {
    opt.multiplicities = true;
  } else if (level == "foliation") {
    opt.foliation = true;
  } else if (level == "special") {
    opt.special = true;
  } else {
    throw UsageError("unknown level '" + level + "'");
  }
  std::optional<RealizationResult> realized;
  try {
    realized = realize_plan(plan, opt);
  } catch (const DegreeCapExceeded& e) {
    err << "refused: predicted degree " << e.predicted_degree() << " exceeds --max-degree " << e.cap() << "\n";
    return kCapRefused;
  }
  const RealizationResult& r = *realized;
  out << "t: " << r.t.to_string() << "  data: " << r.data.to_string() << "\n";
  print_report_text(r.verification, out);
  return r.verification.passed() ? kOk : kVerifyFailed;
}

struct SweepArgs {
  std::int64_t mmin = -2, mmax = 2, nmin = -2, nmax = 2;
  std::string out;
  std::optional<std::int64_t> realize_under;
};

inline int cmd_sweep(const SweepArgs& s, std::ostream& out, std::ostream& err) {
  if (s.mmin > s.mmax || s.nmin > s.nmax) throw UsageError("empty sweep range");
  std::ofstream file(s.out, std::ios::trunc);
  if (!file) {
    err << "cannot write " << s.out << "\n";
    return kIo;
  }
  std::size_t count = 0, failed = 0;
  for (std::int64_t m = s.mmin; m <= s.mmax; ++m) {
    for (std::int64_t n = s.nmin; n <= s.nmax; ++n) {
      const EisensteinParam t(m, n);
      std::optional<std::int64_t> realized;
      if (s.realize_under && data_for(t).data.d <= *s.realize_under) {
        realized = realize(t).generators.degree();
      }
      const CatalogRecord r = make_record(t, realized);
      if (!r.invariants_passed) ++failed;
      file << record_to_json(r).dump() << "\n";
      file.flush();
      if (!file) {
        err << "write failed on " << s.out << "\n";
        return kIo;
      }
      ++count;
    }
  }
  out << count << " records written to " << s.out << ", " << failed << " failing invariants\n";
  return failed ? kVerifyFailed : kOk;
}

inline int cmd_emit_singular(const ParamArgs& a, std::ostream& out) {
  out << singular_script(a.plan());
  return kOk;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Elliptic pencils of the Lins Neto family: plans, data, generators"};
  app.require_subcommand(1);

  ParamArgs plan_args, data_args, realize_args, verify_args, sing_args;
  std::string plan_format = "text", data_format = "text", realize_format = "text", checks = "all";
  std::string level = "data";
  bool trace = false;
  std::int64_t realize_cap = 400, verify_cap = 400;
  std::optional<std::string> record;
  SweepArgs sweep;

  auto* plan = app.add_subcommand("plan", "step sequence reducing t to a base pencil");
  plan_args.attach(plan, false);
  plan->add_option("--format", plan_format)->check(CLI::IsMember({"text", "json"}));

  auto* data = app.add_subcommand("data", "degree and multiplicities [d, m1, mtau, mtau2, minf]");
  data_args.attach(data, true);
  data->add_flag("--trace", trace, "print the list after every step");
  data->add_option("--format", data_format)->check(CLI::IsMember({"text", "json"}));

  auto* real = app.add_subcommand("realize", "generators of the pencil");
  realize_args.attach(real, true);
  real->add_option("--max-degree", realize_cap, "refuse above this predicted degree");
  real->add_option("--format", realize_format)->check(CLI::IsMember({"text", "json", "latex"}));
  real->add_option("--checks", checks, "comma list of multiplicities,foliation,special, or all, or none");

  auto* ver = app.add_subcommand("verify", "run one verification battery, or check a catalog file");
  verify_args.attach(ver, true);
  ver->add_option("--level", level)->check(CLI::IsMember({"data", "multiplicities", "foliation", "special"}));
  ver->add_option("--record", record, "JSON-Lines catalog to re-verify");
  ver->add_option("--max-degree", verify_cap, "refuse above this predicted degree");

  auto* sw = app.add_subcommand("sweep", "catalog a rectangle of parameters as JSON-Lines");
  sw->add_option("--mmin", sweep.mmin);
  sw->add_option("--mmax", sweep.mmax);
  sw->add_option("--nmin", sweep.nmin);
  sw->add_option("--nmax", sweep.nmax);
  sw->add_option("--out", sweep.out)->required();
  sw->add_option("--realize-under", sweep.realize_under, "also realize when the predicted degree is at most this");

  auto* sing = app.add_subcommand("emit-singular", "Singular script replaying the plan");
  sing_args.attach(sing, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*plan) return cmd_plan(plan_args, plan_format, out);
    if (*data) return cmd_data(data_args, trace, data_format, out);
    if (*real) return cmd_realize(realize_args, realize_cap, realize_format, checks, out, err);
    if (*ver) return cmd_verify(verify_args, level, record, verify_cap, out, err);
    if (*sw) return cmd_sweep(sweep, out, err);
    if (*sing) return cmd_emit_singular(sing_args, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const InconsistencyError& e) {
    err << "inconsistency: " << e.what() << "\n";
    return kVerifyFailed;
  }
  return kUsage;
}

}  // namespace lnpencil::cli
