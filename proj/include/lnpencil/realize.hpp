// Realization of the pencil F_t: strict transforms of a generator pair
// under the quadratic maps, the t -> generators pipeline, and the checks
// run against a realized pencil.
#pragma once

#include "lnpencil/eisenstein_param.hpp"
#include "lnpencil/hesse.hpp"
#include "lnpencil/hompoly.hpp"
#include "lnpencil/pencil_data.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace lnpencil {

struct PencilGenerators {
  HomPoly F, G;

  int degree() const { return F.degree(); }
  // Members c1 F + c2 G.
  HomPoly member(const QTauScalar& c1, const QTauScalar& c2) const {
    HomPoly m = F * c1;
    m.add_scaled(G, c2);
    return m;
  }
  bool contains(const HomPoly& h) const {
    if (h.is_zero() || h.degree() != degree()) return false;
    return in_span(h, F, G).has_value();
  }
  // Same pencil: each generator of one lies in the span of the other.
  bool same_pencil(const PencilGenerators& o) const { return contains(o.F) && contains(o.G); }
};

inline PencilGenerators make_generators(const HomPoly& F, const HomPoly& G) {
  if (F.degree() != G.degree()) throw InconsistencyError("generators of different degree");
  PencilGenerators p{normalized(F), normalized(G)};
  if (!linearly_independent(p.F, p.G)) throw InconsistencyError("generators are linearly dependent");
  return p;
}

inline PencilGenerators base_generators(BasePencil b) {
  const QTauScalar t = QTauScalar::tau(), t2 = QTauScalar::tau2();
  if (b == BasePencil::F1) {
    const HomPoly F = HomPoly::linear(-1, 1, 0) * HomPoly::linear(-1, 0, 1) * HomPoly::linear(0, 1, -1);
    const HomPoly G = HomPoly::linear(-t, 1, 0) * HomPoly::linear(-t2, 0, 1) * HomPoly::linear(0, -t, 1);
    return make_generators(F, G);
  }
  const HomPoly x3 = HomPoly::monomial({3, 0, 0}), y3 = HomPoly::monomial({0, 3, 0}),
                z3 = HomPoly::monomial({0, 0, 3});
  return make_generators(y3 - x3, y3 - z3);
}

struct StrictTransform {
  PencilGenerators gens;
  std::array<int, 3> stripped{};  // power of each triangle line removed
};

inline StrictTransform strict_transform_detailed(CremonaStep step, const PencilGenerators& gens) {
  const QuadMap& Q = quad_map(step);
  HomPoly F = pullback(gens.F, Q.components);
  HomPoly G = pullback(gens.G, Q.components);
  StrictTransform out;
  for (int k = 0; k < 3; ++k) {
    const HomPoly& line = Q.triangle[k];
    HomPoly f = F, g = G;
    const int kf = divisibility_order(f, line);
    const int kg = divisibility_order(g, line);
    const int common = std::min(kf, kg);
    F = kf > common ? f * pow(line, static_cast<unsigned>(kf - common)) : std::move(f);
    G = kg > common ? g * pow(line, static_cast<unsigned>(kg - common)) : std::move(g);
    out.stripped[k] = common;
  }
  out.gens = make_generators(F, G);
  return out;
}

inline PencilGenerators strict_transform_pencil(CremonaStep step, const PencilGenerators& gens) {
  return strict_transform_detailed(step, gens).gens;
}

// Restriction of f to the line a x + b y + c z = 0, as a binary form in the
// two coordinates that remain after eliminating the last one with a
// nonzero coefficient.
inline HomPoly restrict_to_line(const HomPoly& f, const HomPoly& line) {
  if (line.degree() != 1 || line.is_zero()) throw std::domain_error("restrict_to_line: not a line");
  std::array<QTauScalar, 3> c{line.coefficient({1, 0, 0}), line.coefficient({0, 1, 0}),
                              line.coefficient({0, 0, 1})};
  int elim = 2;
  while (c[elim].is_zero()) --elim;
  std::array<HomPoly, 3> sub{HomPoly::var(Var::X), HomPoly::var(Var::Y), HomPoly::var(Var::Z)};
  const QTauScalar inv = -c[elim].inverse();
  HomPoly repl(1);
  for (int v = 0; v < 3; ++v) {
    if (v != elim && !c[v].is_zero()) repl.add_scaled(sub[v], c[v] * inv);
  }
  sub[elim] = repl;
  return pullback(f, sub);
}

class DegreeCapExceeded : public std::runtime_error {
 public:
  DegreeCapExceeded(std::int64_t predicted, std::int64_t cap)
      : std::runtime_error("predicted degree " + std::to_string(predicted) + " exceeds cap " +
                           std::to_string(cap)),
        predicted_(predicted),
        cap_(cap) {}
  std::int64_t predicted_degree() const { return predicted_; }
  std::int64_t cap() const { return cap_; }

 private:
  std::int64_t predicted_;
  std::int64_t cap_;
};

// ---------------------------------------------------------------------------
// Checks

struct PointMultiplicity {
  std::size_t point_index;  // into arrangement().points
  int expected;
  int generic;              // pseudo-generic member
  int generators_min;       // min(mult F, mult G)
};

struct MultiplicityReport {
  QTauScalar c1, c2;  // the member used
  std::vector<PointMultiplicity> points;
  bool passed = false;
};

namespace detail {

inline bool divisible_by_arrangement_line(const HomPoly& f) {
  for (const auto& l : arrangement().lines) {
    if (restrict_to_line(f, l.form).is_zero()) return true;
  }
  return false;
}

}  // namespace detail

// Member c1 F + c2 G used as the generic one: a fixed choice, replaced by a
// second one when it contains an arrangement line.
inline std::pair<QTauScalar, QTauScalar> pseudo_generic_coefficients(const PencilGenerators& gens) {
  const QTauScalar t = QTauScalar::tau();
  std::pair<QTauScalar, QTauScalar> c{QTauScalar(2) + QTauScalar(3) * t, QTauScalar(5) - t};
  if (detail::divisible_by_arrangement_line(gens.member(c.first, c.second))) {
    c = {QTauScalar(7) + t, QTauScalar(1) + QTauScalar(11) * t};
  }
  return c;
}

inline MultiplicityReport verify_multiplicities(const PencilGenerators& gens, const PencilData& data) {
  MultiplicityReport rep;
  std::tie(rep.c1, rep.c2) = pseudo_generic_coefficients(gens);
  const HomPoly member = gens.member(rep.c1, rep.c2);
  const auto& pts = arrangement().points;
  rep.passed = true;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    PointMultiplicity pm;
    pm.point_index = k;
    pm.expected = static_cast<int>(data.multiplicity(static_cast<int>(pts[k].triple)));
    pm.generic = multiplicity_at(member, pts[k].point);
    pm.generators_min = std::min(multiplicity_at(gens.F, pts[k].point), multiplicity_at(gens.G, pts[k].point));
    if (pm.generic != pm.expected) rep.passed = false;
    rep.points.push_back(pm);
  }
  return rep;
}

// G dF - F dG
inline OneForm foliation_oneform(const PencilGenerators& gens) {
  const HomPoly& F = gens.F;
  const HomPoly& G = gens.G;
  auto coef = [&](Var v) { return G * partial(F, v) - F * partial(G, v); };
  OneForm w(coef(Var::X), coef(Var::Y), coef(Var::Z));
  if (!w.satisfies_euler()) throw std::logic_error("foliation_oneform: Euler identity fails");
  return w;
}

inline bool verify_lins_neto(const PencilGenerators& gens, const RationalParam& t) {
  return wedge_vanishes(foliation_oneform(gens), lins_neto_form(t));
}

struct SpecialMember {
  QTauScalar c1, c2;  // normalized: c1 = 1, or (0 : 1)
  HomPoly member;
  std::vector<std::string> lines;  // arrangement lines dividing the member, with repetition
  HomPoly residual;                // member with those lines removed, normalized
  std::optional<HomPoly> residual_cube_root;
};

namespace detail {

inline std::pair<QTauScalar, QTauScalar> projective_pair(const QTauScalar& c1, const QTauScalar& c2) {
  if (c1.is_zero()) return {QTauScalar(0), QTauScalar(1)};
  return {QTauScalar(1), c2 / c1};
}

// s with f = lambda s^3 for a scalar lambda; f normalized.
inline std::optional<HomPoly> cube_root_up_to_scalar(const HomPoly& f) {
  for (const QTauScalar& u : {QTauScalar(1), QTauScalar::tau(), QTauScalar::tau2()}) {
    if (auto s = cube_root(f * u)) return normalized(*s);
  }
  return std::nullopt;
}

}  // namespace detail

inline std::vector<SpecialMember> special_members(const PencilGenerators& gens) {
  std::vector<SpecialMember> out;
  for (const auto& l : arrangement().lines) {
    const HomPoly f = restrict_to_line(gens.F, l.form);
    const HomPoly g = restrict_to_line(gens.G, l.form);
    std::pair<QTauScalar, QTauScalar> c;
    if (f.is_zero() && g.is_zero()) throw InconsistencyError("line " + l.label + " is a fixed component");
    if (f.is_zero()) {
      c = {1, 0};
    } else if (g.is_zero()) {
      c = {0, 1};
    } else if (auto lam = proportionality(f, g)) {
      c = {1, -*lam};
    } else {
      continue;  // no member contains this line
    }
    c = detail::projective_pair(c.first, c.second);
    bool seen = false;
    for (const auto& s : out) seen = seen || (s.c1 == c.first && s.c2 == c.second);
    if (seen) continue;
    SpecialMember sm;
    sm.c1 = c.first;
    sm.c2 = c.second;
    sm.member = normalized(gens.member(sm.c1, sm.c2));
    HomPoly res = sm.member;
    for (const auto& l2 : arrangement().lines) {
      int k = divisibility_order(res, l2.form);
      for (int j = 0; j < k; ++j) sm.lines.push_back(l2.label);
    }
    sm.residual = normalized(res);
    sm.residual_cube_root = detail::cube_root_up_to_scalar(sm.residual);
    out.push_back(std::move(sm));
  }
  return out;
}

struct SpecialReport {
  std::vector<SpecialMember> members;
  std::int64_t darboux_degree = 0;  // foliation degree from the multiple components
  bool passed = false;              // three members, cubes of degree d/3 - 1, degree 4
};

inline SpecialReport verify_special_members(const PencilGenerators& gens) {
  SpecialReport rep;
  rep.members = special_members(gens);
  const int d = gens.degree();
  bool ok = rep.members.size() == 3;
  std::vector<MultipleComponent> comps;
  for (const auto& sm : rep.members) {
    ok = ok && sm.residual_cube_root.has_value() && sm.residual.degree() == d - 3 &&
         sm.residual_cube_root->degree() == d / 3 - 1;
    if (sm.residual_cube_root && sm.residual_cube_root->degree() > 0) {
      comps.push_back({3, sm.residual_cube_root->degree()});
    }
  }
  rep.darboux_degree = darboux_pencil_degree(d, comps);
  rep.passed = ok && rep.darboux_degree == 4;
  return rep;
}

// ---------------------------------------------------------------------------
// Pipeline

struct RealizeOptions {
  std::int64_t degree_cap = 400;
  bool multiplicities = false;
  bool foliation = false;
  bool special = false;
};

struct VerificationReport {
  DataInvariantReport data;
  std::vector<std::array<int, 3>> stripped;  // per step
  std::optional<MultiplicityReport> multiplicities;
  std::optional<bool> foliation;
  std::optional<SpecialReport> special;

  bool passed() const {
    return data.passed() && (!multiplicities || multiplicities->passed) && (!foliation || *foliation) &&
           (!special || special->passed);
  }
};

struct RealizationResult {
  RationalParam t;
  DescentPlan plan;
  PencilData data;
  PencilGenerators generators;
  VerificationReport verification;
};

inline RealizationResult realize_plan(const DescentPlan& plan, const RealizeOptions& opt = {}) {
  const DataResult dr = data_for_plan(plan);
  if (dr.data.d > opt.degree_cap) throw DegreeCapExceeded(dr.data.d, opt.degree_cap);
  RealizationResult res{replay_plan(plan), plan, dr.data, base_generators(plan.base), {}};
  res.verification.data = check_data_invariants(dr.data);
  for (std::size_t k = 0; k < plan.steps.size(); ++k) {
    StrictTransform st = strict_transform_detailed(plan.steps[k], res.generators);
    if (st.gens.degree() != dr.trace[k].d) {
      throw InconsistencyError("step " + std::to_string(k) + " (" + std::string(step_name(plan.steps[k])) +
                               "): degree " + std::to_string(st.gens.degree()) + ", data predicts " +
                               std::to_string(dr.trace[k].d));
    }
    res.generators = std::move(st.gens);
    res.verification.stripped.push_back(st.stripped);
  }
  if (opt.multiplicities) res.verification.multiplicities = verify_multiplicities(res.generators, res.data);
  if (opt.foliation) res.verification.foliation = verify_lins_neto(res.generators, res.t);
  if (opt.special) res.verification.special = verify_special_members(res.generators);
  return res;
}

inline RealizationResult realize(const EisensteinParam& t, const RealizeOptions& opt = {}) {
  return realize_plan(plan_descent(t), opt);
}

}  // namespace lnpencil
