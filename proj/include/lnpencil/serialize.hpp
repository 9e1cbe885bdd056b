// Text formats: JSON for polynomials and catalog records, LaTeX for
// reading, and a Singular script that replays a plan in an external CAS.
#pragma once

#include "lnpencil/eisenstein_param.hpp"
#include "lnpencil/hompoly.hpp"
#include "lnpencil/pencil_data.hpp"
#include "lnpencil/realize.hpp"

#include <json.hpp>

#include <cctype>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lnpencil {

using json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// JSON

// Always "p/q", lowest terms, q > 0.
inline std::string rational_string(mpq_class q) {
  q.canonicalize();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline mpq_class parse_rational(const std::string& s) {
  mpq_class q;
  if (s.empty() || q.set_str(s, 10) != 0) throw FormatError("bad rational: '" + s + "'");
  if (sgn(q.get_den()) == 0) throw FormatError("zero denominator: '" + s + "'");
  q.canonicalize();
  return q;
}

inline json scalar_to_json(const QTauScalar& c) {
  return json{{"a", rational_string(c.a())}, {"b", rational_string(c.b())}};
}

inline QTauScalar scalar_from_json(const json& j) {
  if (!j.is_object() || !j.contains("a") || !j.contains("b")) throw FormatError("coefficient needs a and b");
  return QTauScalar(parse_rational(j.at("a").get<std::string>()), parse_rational(j.at("b").get<std::string>()));
}

inline json poly_to_json(const HomPoly& f) {
  json terms = json::array();
  for (const auto& t : f.terms()) {
    terms.push_back(json{{"exp", {t.mono.e[0], t.mono.e[1], t.mono.e[2]}}, {"coef", scalar_to_json(t.coef)}});
  }
  return json{{"degree", f.degree()}, {"terms", std::move(terms)}};
}

inline HomPoly poly_from_json(const json& j) {
  try {
    const int deg = j.at("degree").get<int>();
    if (deg < 0) throw FormatError("negative degree");
    std::vector<Term> ts;
    for (const auto& t : j.at("terms")) {
      const auto& e = t.at("exp");
      if (!e.is_array() || e.size() != 3) throw FormatError("exp must have three entries");
      Monomial m(e[0].get<std::uint32_t>(), e[1].get<std::uint32_t>(), e[2].get<std::uint32_t>());
      if (static_cast<int>(m.degree()) != deg) throw FormatError("term degree does not match declared degree");
      ts.push_back({m, scalar_from_json(t.at("coef"))});
    }
    return HomPoly::from_terms(deg, std::move(ts));
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed polynomial: ") + e.what());
  }
}

inline json data_to_json(const PencilData& d) { return json::array({d.d, d.m1, d.mtau, d.mtau2, d.minf}); }

inline PencilData data_from_json(const json& j) {
  if (!j.is_array() || j.size() != 5) throw FormatError("data must be [d, m1, mtau, mtau2, minf]");
  return {j[0].get<std::int64_t>(), j[1].get<std::int64_t>(), j[2].get<std::int64_t>(), j[3].get<std::int64_t>(),
          j[4].get<std::int64_t>()};
}

// ---------------------------------------------------------------------------
// LaTeX

namespace detail {

inline std::string latex_rational(const mpq_class& q) {
  mpq_class a = abs(q);
  if (a.get_den() == 1) return a.get_num().get_str();
  return "\\frac{" + a.get_num().get_str() + "}{" + a.get_den().get_str() + "}";
}

// |q| times a symbol, with unit coefficients dropped.
inline std::string latex_scaled(const mpq_class& q, const std::string& sym) {
  if (sym.empty()) return latex_rational(q);
  if (abs(q) == 1) return sym;
  return latex_rational(q) + sym;
}

// Coefficient as "(b\tau + a)" style, sign folded in; is_one marks +-1.
inline std::string latex_coef(const QTauScalar& c, bool& negative, bool& is_one) {
  is_one = false;
  negative = false;
  if (c.is_rational()) {
    negative = sgn(c.a()) < 0;
    is_one = abs(c.a()) == 1;
    return latex_rational(c.a());
  }
  if (sgn(c.a()) == 0) {
    negative = sgn(c.b()) < 0;
    return latex_scaled(c.b(), "\\tau");
  }
  std::string s = "(" + std::string(sgn(c.b()) < 0 ? "-" : "") + latex_scaled(c.b(), "\\tau");
  s += sgn(c.a()) < 0 ? " - " : " + ";
  s += latex_rational(c.a()) + ")";
  return s;
}

inline std::string latex_monomial(const Monomial& m) {
  static const char* names[3] = {"x", "y", "z"};
  std::string s;
  for (int v = 0; v < 3; ++v) {
    if (m.e[v] == 0) continue;
    s += names[v];
    if (m.e[v] > 1) s += "^{" + std::to_string(m.e[v]) + "}";
  }
  return s;
}

}  // namespace detail

inline std::string to_latex(const HomPoly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : f.terms()) {
    bool neg = false, one = false;
    std::string c = detail::latex_coef(t.coef, neg, one);
    std::string m = detail::latex_monomial(t.mono);
    if (first) {
      out += neg ? "-" : "";
    } else {
      out += neg ? " - " : " + ";
    }
    if (m.empty()) {
      out += c;
    } else {
      // keep a control word like \tau apart from the variable after it
      if (!one && std::isalpha(static_cast<unsigned char>(c.back()))) c += ' ';
      out += (one ? "" : c) + m;
    }
    first = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Singular

inline std::string singular_map_name(CremonaStep s) {
  switch (s) {
    case CremonaStep::QInf: return "Qinf";
    case CremonaStep::Q1: return "Q1";
    case CremonaStep::QTau: return "Qt";
    case CremonaStep::QTau2: return "Qt2";
  }
  throw std::logic_error("singular_map_name: unreachable");
}

// tau is the parameter a with minimal polynomial a^2 + a + 1.
inline std::string singular_script(BasePencil base, const std::vector<CremonaStep>& steps) {
  std::ostringstream os;
  os << "ring R=(0,a),(x,y,z),dp;\n";
  os << "minpoly=a2+a+1;\n";
  if (base == BasePencil::FInf) {
    os << "poly f = y^3-x^3;\n";
    os << "poly g = y^3-z^3;\n";
  } else {
    os << "poly f = (y-x)*(z-x)*(y-z);\n";
    os << "poly g = (y-a*x)*(z-a^2*x)*(z-a*y);\n";
  }
  os << "map Qinf = R, y*z, x*z,  x*y;\n";
  os << "map Q1 = R, y^2- x*z, x^2- y*z, z^2- x*y;\n";
  os << "map Qt = R, a*y^2- x*z, a*x^2- y*z, z^2- a^2 *x*y;\n";
  os << "map Qt2 = R, a^2*y^2- x*z, a^2 *x^2- y*z, z^2- a*x*y;\n";
  if (steps.empty()) {
    os << "map Cr= R, x, y, z;\n";
  } else {
    os << "map Cr= " << singular_map_name(steps.front()) << ";\n";
    for (std::size_t k = 1; k < steps.size(); ++k) os << "Cr=" << singular_map_name(steps[k]) << "(Cr);\n";
  }
  os << "poly Crf=Cr(f);\n";
  os << "poly Crg =Cr(g);\n";
  os << "factorize(Crf);\n";
  os << "factorize(Crg);\n";
  return os.str();
}

inline std::string singular_script(const DescentPlan& plan) { return singular_script(plan.base, plan.steps); }

// ---------------------------------------------------------------------------
// Catalog records (one JSON object per line)

struct CatalogRecord {
  std::int64_t m = 0, n = 0;
  std::vector<int> step_codes;
  std::string base;
  PencilData data;
  bool invariants_passed = false;
  std::optional<std::int64_t> realized_degree;
  std::string timestamp;
};

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline CatalogRecord make_record(const EisensteinParam& t, std::optional<std::int64_t> realized_degree = std::nullopt) {
  const DataResult dr = data_for(t);
  CatalogRecord r;
  r.m = t.m();
  r.n = t.n();
  r.step_codes = step_codes(dr.plan.steps);
  r.base = std::string(base_name(dr.plan.base));
  r.data = dr.data;
  r.invariants_passed = check_data_invariants(dr.data).passed();
  r.realized_degree = realized_degree;
  r.timestamp = utc_timestamp();
  return r;
}

inline json record_to_json(const CatalogRecord& r) {
  json j{{"t", {{"m", r.m}, {"n", r.n}}},
         {"stepCodes", r.step_codes},
         {"base", r.base},
         {"data", data_to_json(r.data)},
         {"invariantsPassed", r.invariants_passed},
         {"timestamp", r.timestamp}};
  j["realizedDegree"] = r.realized_degree ? json(*r.realized_degree) : json(nullptr);
  return j;
}

inline CatalogRecord record_from_json(const json& j) {
  try {
    CatalogRecord r;
    r.m = j.at("t").at("m").get<std::int64_t>();
    r.n = j.at("t").at("n").get<std::int64_t>();
    r.step_codes = j.at("stepCodes").get<std::vector<int>>();
    r.base = j.at("base").get<std::string>();
    r.data = data_from_json(j.at("data"));
    r.invariants_passed = j.at("invariantsPassed").get<bool>();
    if (j.contains("realizedDegree") && !j.at("realizedDegree").is_null()) {
      r.realized_degree = j.at("realizedDegree").get<std::int64_t>();
    }
    r.timestamp = j.value("timestamp", "");
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed catalog record: ") + e.what());
  }
}

// Re-derives everything in the record from its parameter alone.
struct RecordCheck {
  bool plan_matches = false;
  bool data_matches = false;
  bool invariants_hold = false;
  bool flag_consistent = false;
  bool degree_consistent = false;

  bool passed() const { return plan_matches && data_matches && invariants_hold && flag_consistent && degree_consistent; }
};

inline RecordCheck verify_record(const CatalogRecord& r) {
  RecordCheck c;
  const DataResult dr = data_for(EisensteinParam(r.m, r.n));
  c.plan_matches = r.step_codes == step_codes(dr.plan.steps) && r.base == base_name(dr.plan.base);
  c.data_matches = r.data == dr.data;
  c.invariants_hold = check_data_invariants(r.data).passed();
  c.flag_consistent = r.invariants_passed == c.invariants_hold;
  c.degree_consistent = !r.realized_degree || *r.realized_degree == r.data.d;
  return c;
}

// ---------------------------------------------------------------------------
// Realization output

inline json report_to_json(const VerificationReport& v) {
  json j;
  j["dataInvariants"] = v.data.passed();
  json stripped = json::array();
  for (const auto& s : v.stripped) stripped.push_back({s[0], s[1], s[2]});
  j["stripped"] = std::move(stripped);
  if (v.multiplicities) {
    json pts = json::array();
    for (const auto& p : v.multiplicities->points) {
      pts.push_back({{"point", arrangement().points[p.point_index].point.to_string()},
                     {"expected", p.expected},
                     {"generic", p.generic},
                     {"generatorsMin", p.generators_min}});
    }
    j["multiplicities"] = {{"passed", v.multiplicities->passed}, {"points", std::move(pts)}};
  }
  if (v.foliation) j["foliation"] = *v.foliation;
  if (v.special) {
    json ms = json::array();
    for (const auto& s : v.special->members) {
      ms.push_back({{"c1", scalar_to_json(s.c1)},
                    {"c2", scalar_to_json(s.c2)},
                    {"lines", s.lines},
                    {"residualDegree", s.residual.degree()},
                    {"residualIsCube", s.residual_cube_root.has_value()}});
    }
    j["special"] = {{"passed", v.special->passed}, {"darbouxDegree", v.special->darboux_degree}, {"members", ms}};
  }
  j["passed"] = v.passed();
  return j;
}

inline json realization_to_json(const RealizationResult& r) {
  return json{{"t", r.t.to_string()},
              {"stepCodes", step_codes(r.plan.steps)},
              {"base", std::string(base_name(r.plan.base))},
              {"data", data_to_json(r.data)},
              {"F", poly_to_json(r.generators.F)},
              {"G", poly_to_json(r.generators.G)},
              {"verification", report_to_json(r.verification)}};
}

}  // namespace lnpencil
