// Shared test helpers: seeded generators and independent oracles.
#pragma once

#include "lnpencil/lnpencil.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

namespace testsupport {

using namespace lnpencil;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  mpq_class rational(int span = 9) {
    mpq_class q(static_cast<long>(integer(-span, span)), static_cast<unsigned long>(coin(0.3) ? integer(1, 6) : 1));
    q.canonicalize();
    return q;
  }
  QTauScalar scalar(int span = 9) { return QTauScalar(rational(span), rational(span)); }
  QTauScalar nonzero_scalar(int span = 9) {
    for (;;) {
      QTauScalar s = scalar(span);
      if (!s.is_zero()) return s;
    }
  }
  QTauScalar eisenstein(int span = 9) {
    return QTauScalar(mpq_class(static_cast<long>(integer(-span, span))), mpq_class(static_cast<long>(integer(-span, span))));
  }

  // Random homogeneous polynomial; each monomial kept with probability density.
  HomPoly poly(int degree, double density = 0.5, bool integral = false) {
    std::vector<Term> ts;
    for (int i = degree; i >= 0; --i) {
      for (int j = degree - i; j >= 0; --j) {
        if (!coin(density)) continue;
        ts.push_back({Monomial(i, j, degree - i - j), integral ? eisenstein() : scalar()});
      }
    }
    return HomPoly::from_terms(degree, std::move(ts));
  }
  HomPoly nonzero_poly(int degree, double density = 0.5, bool integral = false) {
    for (;;) {
      HomPoly f = poly(degree, density, integral);
      if (!f.is_zero()) return f;
    }
  }
  HomPoly line() {
    for (;;) {
      HomPoly l = HomPoly::linear(eisenstein(4), eisenstein(4), eisenstein(4));
      if (!l.is_zero()) return l;
    }
  }
  std::array<QTauScalar, 3> point(int span = 7) { return {scalar(span), scalar(span), scalar(span)}; }
  ProjPoint proj_point() {
    for (;;) {
      auto p = point();
      if (!(p[0].is_zero() && p[1].is_zero() && p[2].is_zero())) return ProjPoint(p[0], p[1], p[2]);
    }
  }

 private:
  std::mt19937_64 rng_;
};

// Pullback checked pointwise: (f o P)(p) = f(P(p)).
inline bool pullback_agrees_at(const HomPoly& pulled, const HomPoly& f, const std::array<HomPoly, 3>& map,
                               const std::array<QTauScalar, 3>& p) {
  std::array<QTauScalar, 3> image{map[0].evaluate(p), map[1].evaluate(p), map[2].evaluate(p)};
  return pulled.evaluate(p) == f.evaluate(image);
}

// Multiplicity as the least order of a nonvanishing partial derivative.
inline int multiplicity_by_derivatives(const HomPoly& f, const ProjPoint& p) {
  if (f.is_zero()) return -1;
  std::map<std::array<int, 3>, HomPoly> layer{{{0, 0, 0}, f}};
  for (int k = 0; k <= f.degree(); ++k) {
    for (const auto& [idx, g] : layer) {
      if (!g.evaluate(p.c).is_zero()) return k;
    }
    std::map<std::array<int, 3>, HomPoly> next;
    for (const auto& [idx, g] : layer) {
      for (int v = 0; v < 3; ++v) {
        auto key = idx;
        ++key[v];
        if (!next.count(key)) next.emplace(key, partial(g, static_cast<Var>(v)));
      }
    }
    layer = std::move(next);
  }
  return -1;
}

// Planner and data rules written out list-style, for cross-checking.
struct ListOracle {
  std::vector<int> codes;
  std::array<std::int64_t, 5> data;
  std::vector<std::array<std::int64_t, 5>> trace;
};

inline ListOracle list_oracle(std::int64_t m, std::int64_t n) {
  std::vector<int> rec;
  std::array<std::int64_t, 5> L{};
  while ((m < 0 ? -m : m) + (n < 0 ? -n : n) > 1) {
    if (m + n > 1) {
      m = 1 - m;
      n = 1 - n;
      rec.push_back(3);
    } else if (m <= n) {
      m = -m - 1;
      n = -n;
      rec.push_back(1);
    } else {
      m = -m;
      n = -n - 1;
      rec.push_back(2);
    }
  }
  if (m == 0 && n == 0) {
    rec.push_back(0);
    L = {3, 1, 1, 1, 0};
  } else if (m == -1 && n == 0) {
    rec.push_back(1);
    rec.push_back(0);
    L = {3, 1, 1, 1, 0};
  } else if (m == 1 && n == 0) {
    L = {3, 0, 1, 1, 1};
  } else if (m == 0 && n == -1) {
    rec.push_back(2);
    rec.push_back(0);
    L = {3, 1, 1, 1, 0};
  } else {
    rec.push_back(3);
    L = {3, 0, 1, 1, 1};
  }
  ListOracle out;
  out.codes.assign(rec.rbegin(), rec.rend());
  for (int c : out.codes) {
    auto l = L;
    switch (c) {
      case 0: L = {2 * l[0] - 3 * l[4], l[1], l[3], l[2], l[0] - 2 * l[4]}; break;
      case 1: L = {2 * l[0] - 3 * l[1], l[0] - 2 * l[1], l[3], l[2], l[4]}; break;
      case 2: L = {2 * l[0] - 3 * l[2], l[3], l[0] - 2 * l[2], l[1], l[4]}; break;
      case 3: L = {2 * l[0] - 3 * l[3], l[2], l[1], l[0] - 2 * l[3], l[4]}; break;
    }
    out.trace.push_back(L);
  }
  out.data = L;
  return out;
}

inline HomPoly X() { return HomPoly::var(Var::X); }
inline HomPoly Y() { return HomPoly::var(Var::Y); }
inline HomPoly Z() { return HomPoly::var(Var::Z); }
inline QTauScalar tau() { return QTauScalar::tau(); }
inline QTauScalar tau2() { return QTauScalar::tau2(); }
inline HomPoly c(const QTauScalar& s) { return HomPoly::constant(s); }

}  // namespace testsupport
