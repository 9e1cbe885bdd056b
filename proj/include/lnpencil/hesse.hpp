// Fixed geometric data: the dual Hesse arrangement (nine lines through
// twelve triple points, grouped in four triples), the four quadratic
// Cremona maps Q_1, Q_tau, Q_tau2, Q_inf with their exceptional triangles,
// and the two degree-5 coefficient 1-forms Omega, Xi of the family.
#pragma once

#include "lnpencil/eisenstein_param.hpp"
#include "lnpencil/hompoly.hpp"

#include <array>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace lnpencil {

// The four point triples; index order matches the data list.
enum class PointTriple : int { P1 = 0, PTau = 1, PTau2 = 2, PInf = 3 };

inline std::string triple_name(PointTriple p) {
  static const char* names[] = {"P3(1)", "P3(tau)", "P3(tau^2)", "P3(inf)"};
  return names[static_cast<int>(p)];
}

struct ArrangementLine {
  std::string label;
  HomPoly form;
};

struct ArrangementPoint {
  ProjPoint point;
  PointTriple triple;
  std::array<std::string, 3> lines;  // labels of the lines through the point
};

struct Arrangement {
  std::vector<ArrangementLine> lines;    // l1 l2 l3 m1 m2 m3 n1 n2 n3
  std::vector<ArrangementPoint> points;  // triple by triple

  const ArrangementLine& line(const std::string& label) const {
    for (const auto& l : lines) {
      if (l.label == label) return l;
    }
    throw std::out_of_range("Arrangement: unknown line " + label);
  }

  HomPoly product() const {
    HomPoly p = HomPoly::constant(1);
    for (const auto& l : lines) p = p * l.form;
    return p;
  }

  // index into `points`, or nullopt
  std::optional<std::size_t> find_point(const ProjPoint& p) const {
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (points[k].point == p) return k;
    }
    return std::nullopt;
  }
};

namespace detail {

inline HomPoly lin(QTauScalar a, QTauScalar b, QTauScalar c) { return HomPoly::linear(a, b, c); }

inline Arrangement build_arrangement() {
  const QTauScalar t = QTauScalar::tau(), t2 = QTauScalar::tau2();
  Arrangement A;
  A.lines = {
      {"l1", lin(-1, 1, 0)},        // y - x
      {"l2", lin(-t, 1, 0)},        // y - tau x
      {"l3", lin(-t2, 1, 0)},       // y - tau^2 x
      {"m1", lin(-1, 0, 1)},        // z - x
      {"m2", lin(-t, 0, 1)},        // z - tau x
      {"m3", lin(-t2, 0, 1)},       // z - tau^2 x
      {"n1", lin(0, -1, 1)},        // z - y
      {"n2", lin(0, -t, 1)},        // z - tau y
      {"n3", lin(0, -t2, 1)},       // z - tau^2 y
  };
  using P = PointTriple;
  A.points = {
      {ProjPoint(1, 1, 1), P::P1, {"l1", "m1", "n1"}},
      {ProjPoint(1, t, t2), P::P1, {"l2", "m3", "n2"}},
      {ProjPoint(1, t2, t), P::P1, {"l3", "m2", "n3"}},
      {ProjPoint(1, t, 1), P::PTau, {"l2", "m1", "n3"}},
      {ProjPoint(1, 1, t), P::PTau, {"l1", "m2", "n2"}},
      {ProjPoint(t, 1, 1), P::PTau, {"l3", "m3", "n1"}},
      {ProjPoint(1, 1, t2), P::PTau2, {"l1", "m3", "n3"}},
      {ProjPoint(t2, 1, 1), P::PTau2, {"l2", "m2", "n1"}},
      {ProjPoint(1, t2, 1), P::PTau2, {"l3", "m1", "n2"}},
      {ProjPoint(0, 0, 1), P::PInf, {"l1", "l2", "l3"}},
      {ProjPoint(0, 1, 0), P::PInf, {"m1", "m2", "m3"}},
      {ProjPoint(1, 0, 0), P::PInf, {"n1", "n2", "n3"}},
  };
  return A;
}

}  // namespace detail

inline const Arrangement& arrangement() {
  static const Arrangement A = detail::build_arrangement();
  return A;
}

// (x^3 - z^3)(y^3 - z^3)(x^3 - y^3)
inline HomPoly arrangement_equation() {
  const HomPoly x3 = HomPoly::monomial({3, 0, 0}), y3 = HomPoly::monomial({0, 3, 0}),
                z3 = HomPoly::monomial({0, 0, 3});
  return (x3 - z3) * (y3 - z3) * (x3 - y3);
}

struct QuadMap {
  CremonaStep tag;
  std::array<HomPoly, 3> components;
  std::array<HomPoly, 3> triangle;  // lines joining the indeterminacy points
  PointTriple base_triple;

  HomPoly triangle_product() const { return triangle[0] * triangle[1] * triangle[2]; }
  ProjPoint image(const ProjPoint& p) const {
    return ProjPoint(components[0].evaluate(p.c), components[1].evaluate(p.c),
                     components[2].evaluate(p.c));
  }
  bool indeterminate_at(const ProjPoint& p) const {
    return vanishes_at(components[0], p) && vanishes_at(components[1], p) &&
           vanishes_at(components[2], p);
  }
};

namespace detail {

inline HomPoly mono2(std::uint32_t i, std::uint32_t j, std::uint32_t k, const QTauScalar& c) {
  return HomPoly::monomial({i, j, k}, c);
}

inline QuadMap build_quad_map(CremonaStep s) {
  const QTauScalar t = QTauScalar::tau(), t2 = QTauScalar::tau2();
  auto quad = [&](const QTauScalar& w, const QTauScalar& w2) -> std::array<HomPoly, 3> {
    // (w y^2 - x z, w x^2 - y z, z^2 - w2 x y)
    return {mono2(0, 2, 0, w) - mono2(1, 0, 1, 1), mono2(2, 0, 0, w) - mono2(0, 1, 1, 1),
            mono2(0, 0, 2, 1) - mono2(1, 1, 0, w2)};
  };
  switch (s) {
    case CremonaStep::Q1:
      return {s, quad(1, 1), {lin(1, 1, 1), lin(1, t, t2), lin(1, t2, t)}, PointTriple::P1};
    case CremonaStep::QTau:
      return {s, quad(t, t2), {lin(1, t, t), lin(1, 1, t2), lin(1, t2, 1)}, PointTriple::PTau};
    case CremonaStep::QTau2:
      return {s, quad(t2, t), {lin(1, t, 1), lin(1, t2, t2), lin(1, 1, t)}, PointTriple::PTau2};
    case CremonaStep::QInf:
      return {s,
              {mono2(0, 1, 1, 1), mono2(1, 0, 1, 1), mono2(1, 1, 0, 1)},
              {HomPoly::var(Var::X), HomPoly::var(Var::Y), HomPoly::var(Var::Z)},
              PointTriple::PInf};
  }
  throw std::logic_error("build_quad_map: unreachable");
}

}  // namespace detail

inline const QuadMap& quad_map(CremonaStep s) {
  static const std::array<QuadMap, 4> maps = {
      detail::build_quad_map(CremonaStep::QInf), detail::build_quad_map(CremonaStep::Q1),
      detail::build_quad_map(CremonaStep::QTau), detail::build_quad_map(CremonaStep::QTau2)};
  return maps[step_code(s)];
}

// Q_i^*(L9) = c * (triangle product)^3 * L9 for a nonzero scalar c.
inline bool verify_arrangement_invariance(CremonaStep s) {
  const QuadMap& Q = quad_map(s);
  const HomPoly L9 = arrangement_equation();
  const HomPoly lhs = pullback(L9, Q.components);
  const HomPoly rhs = pow(Q.triangle_product(), 3) * L9;
  auto c = proportionality(lhs, rhs);
  return c.has_value() && !c->is_zero();
}

using TripleAction = std::array<PointTriple, 4>;

// Tabulated action of each map on the four triples (as sets).
inline TripleAction point_triple_action(CremonaStep s) {
  using P = PointTriple;
  switch (s) {
    case CremonaStep::Q1: return {P::P1, P::PTau2, P::PTau, P::PInf};
    case CremonaStep::QTau: return {P::PTau2, P::PTau, P::P1, P::PInf};
    case CremonaStep::QTau2: return {P::PTau, P::P1, P::PTau2, P::PInf};
    case CremonaStep::QInf: return {P::P1, P::PTau2, P::PTau, P::PInf};
  }
  throw std::logic_error("point_triple_action: unreachable");
}

// The same table recomputed by substitution: points off the triangle are
// mapped directly; the indeterminacy triple is recovered as the images of
// the contracted triangle lines. Returns nullopt if some image is not one
// of the twelve points or a triple is not mapped onto a single triple.
inline std::optional<TripleAction> computed_point_triple_action(CremonaStep s) {
  const QuadMap& Q = quad_map(s);
  const Arrangement& A = arrangement();
  TripleAction act{};
  for (int tr = 0; tr < 4; ++tr) {
    std::set<int> targets;
    std::set<std::size_t> hit;
    if (static_cast<PointTriple>(tr) == Q.base_triple) {
      for (const auto& line : Q.triangle) {
        // a point on the line away from the vertices: solve for the last
        // variable with a nonzero coefficient at two sample coordinates
        const int elim = !line.coefficient({0, 0, 1}).is_zero() ? 2
                         : !line.coefficient({0, 1, 0}).is_zero() ? 1
                                                                   : 0;
        std::array<QTauScalar, 3> c{QTauScalar(3), QTauScalar(7), QTauScalar(11)};
        c[elim] = QTauScalar{};
        QTauScalar val = line.evaluate(c);
        Monomial em;
        em.e[elim] = 1;
        c[elim] = -val / line.coefficient(em);
        auto idx = A.find_point(Q.image(ProjPoint(c[0], c[1], c[2])));
        if (!idx) return std::nullopt;
        targets.insert(static_cast<int>(A.points[*idx].triple));
        hit.insert(*idx);
      }
    } else {
      for (std::size_t k = 0; k < A.points.size(); ++k) {
        if (static_cast<int>(A.points[k].triple) != tr) continue;
        if (Q.indeterminate_at(A.points[k].point)) return std::nullopt;
        auto idx = A.find_point(Q.image(A.points[k].point));
        if (!idx) return std::nullopt;
        targets.insert(static_cast<int>(A.points[*idx].triple));
        hit.insert(*idx);
      }
    }
    if (targets.size() != 1 || hit.size() != 3) return std::nullopt;
    act[tr] = static_cast<PointTriple>(*targets.begin());
  }
  return act;
}

struct LinsNetoForms {
  OneForm omega;
  OneForm xi;
};

namespace detail {

inline LinsNetoForms build_lins_neto() {
  const HomPoly x = HomPoly::var(Var::X), y = HomPoly::var(Var::Y), z = HomPoly::var(Var::Z);
  const HomPoly x2 = x * x, y2 = y * y, z2 = z * z;
  // (y - z)(z^2 + y^2 + yz), (x - z)(x^2 + zx + z^2), (x - y)(x^2 + xy + y^2)
  const HomPoly cy = (y - z) * (z2 + y2 + y * z);
  const HomPoly cx = (x - z) * (x2 + z * x + z2);
  const HomPoly cxy = (x - y) * (x2 + x * y + y2);
  OneForm omega(z * cy * y, -(z * cx * x), x * y * cxy);
  OneForm xi(-(cy * x2), cx * y2, -(z2 * cxy));
  return {std::move(omega), std::move(xi)};
}

}  // namespace detail

inline const LinsNetoForms& lins_neto_forms() {
  static const LinsNetoForms f = detail::build_lins_neto();
  return f;
}

// Omega + t Xi; Xi itself at t = infinity.
inline OneForm lins_neto_form(const RationalParam& t) {
  const auto& f = lins_neto_forms();
  if (t.is_infinity()) return f.xi;
  return f.omega + t.value() * f.xi;
}

}  // namespace lnpencil
