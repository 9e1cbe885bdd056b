// Sparse homogeneous polynomials in (x, y, z) over Q(tau), projective
// points and 1-forms.
//
// Terms are kept strictly descending in graded-lex order with x > y > z.
// Because every term has the same total degree this is plain lex order on
// the exponent triple, which the Horner-style pullback relies on.
#pragma once

#include "lnpencil/qtau.hpp"

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lnpencil {

enum class Var : int { X = 0, Y = 1, Z = 2 };

struct Monomial {
  std::array<std::uint32_t, 3> e{0, 0, 0};

  constexpr Monomial() = default;
  constexpr Monomial(std::uint32_t i, std::uint32_t j, std::uint32_t k) : e{i, j, k} {}

  constexpr std::uint32_t degree() const { return e[0] + e[1] + e[2]; }

  bool divides(const Monomial& o) const {
    return e[0] <= o.e[0] && e[1] <= o.e[1] && e[2] <= o.e[2];
  }
  Monomial operator*(const Monomial& o) const {
    return {e[0] + o.e[0], e[1] + o.e[1], e[2] + o.e[2]};
  }
  // Caller guarantees divisibility.
  Monomial operator/(const Monomial& o) const {
    return {e[0] - o.e[0], e[1] - o.e[1], e[2] - o.e[2]};
  }

  // graded lex, x > y > z
  friend std::strong_ordering operator<=>(const Monomial& l, const Monomial& r) {
    if (auto c = l.degree() <=> r.degree(); c != 0) return c;
    return l.e <=> r.e;
  }
  friend bool operator==(const Monomial& l, const Monomial& r) = default;
};

struct Term {
  Monomial mono;
  QTauScalar coef;
};

class HomPoly {
 public:
  HomPoly() = default;
  explicit HomPoly(int degree) : degree_(degree) {
    if (degree < 0) throw std::domain_error("HomPoly: negative degree");
  }

  // Combines repeated monomials and drops zero coefficients.
  static HomPoly from_terms(int degree, std::vector<Term> terms) {
    HomPoly p(degree);
    for (const auto& t : terms) {
      if (static_cast<int>(t.mono.degree()) != degree) {
        throw std::domain_error("HomPoly: term degree differs from polynomial degree");
      }
    }
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.mono > b.mono; });
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
        p.terms_.back().coef += t.coef;
      } else {
        p.terms_.push_back(std::move(t));
      }
    }
    std::erase_if(p.terms_, [](const Term& t) { return t.coef.is_zero(); });
    return p;
  }

  static HomPoly constant(const QTauScalar& c) {
    HomPoly p(0);
    if (!c.is_zero()) p.terms_.push_back({Monomial{}, c});
    return p;
  }
  static HomPoly monomial(const Monomial& m, const QTauScalar& c = 1) {
    HomPoly p(static_cast<int>(m.degree()));
    if (!c.is_zero()) p.terms_.push_back({m, c});
    return p;
  }
  static HomPoly var(Var v) {
    Monomial m;
    m.e[static_cast<int>(v)] = 1;
    return monomial(m);
  }
  // a x + b y + c z
  static HomPoly linear(const QTauScalar& a, const QTauScalar& b, const QTauScalar& c) {
    return from_terms(1, {{{1, 0, 0}, a}, {{0, 1, 0}, b}, {{0, 0, 1}, c}});
  }

  int degree() const { return degree_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }

  const Term& leading_term() const {
    if (terms_.empty()) throw std::domain_error("HomPoly: zero polynomial has no leading term");
    return terms_.front();
  }

  QTauScalar coefficient(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& key) { return t.mono > key; });
    if (it != terms_.end() && it->mono == m) return it->coef;
    return {};
  }

  QTauScalar evaluate(const std::array<QTauScalar, 3>& pt) const {
    // Powers are cached per variable; degrees stay small in practice.
    std::array<std::vector<QTauScalar>, 3> pw;
    for (int v = 0; v < 3; ++v) {
      pw[v].reserve(degree_ + 1);
      pw[v].push_back(QTauScalar(1));
      for (int k = 1; k <= degree_; ++k) pw[v].push_back(pw[v].back() * pt[v]);
    }
    QTauScalar acc;
    for (const auto& t : terms_) {
      acc += t.coef * pw[0][t.mono.e[0]] * pw[1][t.mono.e[1]] * pw[2][t.mono.e[2]];
    }
    return acc;
  }

  HomPoly operator-() const {
    HomPoly r = *this;
    for (auto& t : r.terms_) t.coef = -t.coef;
    return r;
  }

  HomPoly& operator*=(const QTauScalar& c) {
    if (c.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& t : terms_) t.coef *= c;
    return *this;
  }

  // f * (c * m); preserves the term order.
  HomPoly times_term(const Monomial& m, const QTauScalar& c) const {
    HomPoly r(degree_ + static_cast<int>(m.degree()));
    if (c.is_zero()) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coef * c});
    return r;
  }

  // this += c * other (degrees must agree unless one side is zero).
  void add_scaled(const HomPoly& other, const QTauScalar& c = 1) {
    if (other.is_zero() || c.is_zero()) return;
    if (&other == this) {
      QTauScalar k = c + QTauScalar(1);
      if (k.is_zero()) {
        terms_.clear();
      } else {
        *this *= k;
      }
      return;
    }
    if (is_zero()) {
      degree_ = other.degree_;
    } else if (degree_ != other.degree_) {
      throw std::domain_error("HomPoly: adding polynomials of different degree");
    }
    std::vector<Term> out;
    out.reserve(terms_.size() + other.terms_.size());
    auto i = terms_.begin();
    auto j = other.terms_.begin();
    while (i != terms_.end() || j != other.terms_.end()) {
      if (j == other.terms_.end() || (i != terms_.end() && i->mono > j->mono)) {
        out.push_back(std::move(*i++));
      } else if (i == terms_.end() || j->mono > i->mono) {
        out.push_back({j->mono, j->coef * c});
        ++j;
      } else {
        Term t = std::move(*i++);
        t.coef.add_product(j->coef, c);
        ++j;
        if (!t.coef.is_zero()) out.push_back(std::move(t));
      }
    }
    terms_ = std::move(out);
  }

  HomPoly& operator+=(const HomPoly& o) {
    add_scaled(o, 1);
    return *this;
  }
  HomPoly& operator-=(const HomPoly& o) {
    add_scaled(o, -1);
    return *this;
  }

  friend HomPoly operator+(HomPoly l, const HomPoly& r) { return l += r; }
  friend HomPoly operator-(HomPoly l, const HomPoly& r) { return l -= r; }
  friend HomPoly operator*(HomPoly l, const QTauScalar& c) { return l *= c; }
  friend HomPoly operator*(const QTauScalar& c, HomPoly r) { return r *= c; }

  // Zero polynomials compare equal regardless of their nominal degree.
  friend bool operator==(const HomPoly& l, const HomPoly& r) {
    if (l.is_zero() || r.is_zero()) return l.is_zero() && r.is_zero();
    if (l.degree_ != r.degree_ || l.terms_.size() != r.terms_.size()) return false;
    for (std::size_t k = 0; k < l.terms_.size(); ++k) {
      if (l.terms_[k].mono != r.terms_[k].mono || l.terms_[k].coef != r.terms_[k].coef) {
        return false;
      }
    }
    return true;
  }

  std::string to_string(const std::string& tau = "t") const;

 private:
  friend HomPoly operator*(const HomPoly& f, const HomPoly& g);

  int degree_ = 0;
  std::vector<Term> terms_;
};

namespace detail {

inline std::string monomial_string(const Monomial& m, const char* mul = "*") {
  static const char* names[3] = {"x", "y", "z"};
  std::string s;
  for (int v = 0; v < 3; ++v) {
    if (m.e[v] == 0) continue;
    if (!s.empty()) s += mul;
    s += names[v];
    if (m.e[v] > 1) s += "^" + std::to_string(m.e[v]);
  }
  return s;
}

// Renders sum of terms with explicit signs; non-rational coefficients are
// parenthesised.
inline std::string poly_string(const HomPoly& f, const std::string& tau) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : f.terms()) {
    std::string mono = monomial_string(t.mono);
    const QTauScalar& c = t.coef;
    bool neg = false;
    std::string cs;
    if (c.is_rational()) {
      neg = sgn(c.a()) < 0;
      mpq_class ac = abs(c.a());
      if (ac != 1 || mono.empty()) cs = ac.get_str();
    } else if (sgn(c.a()) == 0 && sgn(c.b()) < 0) {
      neg = true;
      cs = "(" + (-c).to_string(tau) + ")";
    } else {
      cs = "(" + c.to_string(tau) + ")";
    }
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    out += cs;
    if (!cs.empty() && !mono.empty()) out += "*";
    out += mono;
    first = false;
  }
  return out;
}

// Small-factor product: merge of shifted copies of the larger factor.
inline HomPoly mul_by_merge(const HomPoly& big, const HomPoly& small) {
  HomPoly acc(big.degree() + small.degree());
  for (const auto& t : small.terms()) acc.add_scaled(big.times_term(t.mono, t.coef));
  return acc;
}

}  // namespace detail

inline std::string HomPoly::to_string(const std::string& tau) const {
  return detail::poly_string(*this, tau);
}

inline std::ostream& operator<<(std::ostream& os, const HomPoly& f) { return os << f.to_string(); }

inline HomPoly operator*(const HomPoly& f, const HomPoly& g) {
  const int D = f.degree() + g.degree();
  if (f.is_zero() || g.is_zero()) return HomPoly(D);
  if (g.size() <= 4) return detail::mul_by_merge(f, g);
  if (f.size() <= 4) return detail::mul_by_merge(g, f);
  // Dense accumulator over (i, j); k = D - i - j.
  const std::size_t stride = static_cast<std::size_t>(D) + 1;
  std::vector<QTauScalar> acc(stride * stride);
  std::vector<char> used(stride * stride, 0);
  for (const auto& s : f.terms()) {
    for (const auto& t : g.terms()) {
      std::size_t idx = (s.mono.e[0] + t.mono.e[0]) * stride + (s.mono.e[1] + t.mono.e[1]);
      acc[idx].add_product(s.coef, t.coef);
      used[idx] = 1;
    }
  }
  HomPoly r(D);
  for (int i = D; i >= 0; --i) {
    for (int j = D - i; j >= 0; --j) {
      std::size_t idx = static_cast<std::size_t>(i) * stride + j;
      if (!used[idx] || acc[idx].is_zero()) continue;
      r.terms_.push_back({Monomial(i, j, D - i - j), std::move(acc[idx])});
    }
  }
  return r;
}

inline HomPoly pow(const HomPoly& f, unsigned e) {
  HomPoly r = HomPoly::constant(1);
  HomPoly base = f;
  while (e) {
    if (e & 1U) r = r * base;
    e >>= 1U;
    if (e) base = base * base;
  }
  return r;
}

namespace detail {

inline int pullback_degree(const std::array<HomPoly, 3>& map) {
  int q = -1;
  for (const auto& c : map) {
    if (c.is_zero()) continue;
    if (q < 0) {
      q = c.degree();
    } else if (c.degree() != q) {
      throw std::domain_error("pullback: map components have different degrees");
    }
  }
  // All components vanish; only a constant survives.
  return q < 0 ? map[0].degree() : q;
}

inline HomPoly pullback_sparse(const HomPoly& f, const std::array<HomPoly, 3>& map) {
  const int q = pullback_degree(map);
  const int d = f.degree();
  const int D = q * d;
  if (f.is_zero()) return HomPoly(D);

  const HomPoly& P1 = map[0];
  const HomPoly& P2 = map[1];
  const HomPoly& P3 = map[2];
  std::vector<HomPoly> p3pow{HomPoly::constant(1)};
  auto p3 = [&](int k) -> const HomPoly& {
    while (static_cast<int>(p3pow.size()) <= k) p3pow.push_back(p3pow.back() * P3);
    return p3pow[k];
  };

  // h_i(P2, P3) where f = sum_i x^i h_i(y, z); the terms of h_i are the
  // contiguous run of f with x-exponent i, in descending y-exponent.
  auto eval_slice = [&](std::vector<Term>::const_iterator begin,
                        std::vector<Term>::const_iterator end, int e) {
    // sum_j c_j P2^j P3^(e-j) by Horner in P2
    HomPoly acc(0);
    int j = e;
    auto it = begin;
    for (; j >= 0; --j) {
      if (j < e) acc = acc * P2;
      if (it != end && static_cast<int>(it->mono.e[1]) == j) {
        acc.add_scaled(p3(e - j), it->coef);
        ++it;
      }
      if (acc.is_zero()) acc = HomPoly(q * (e - j));
    }
    return acc;
  };

  const auto& ts = f.terms();
  HomPoly acc(0);
  auto it = ts.begin();
  for (int i = d; i >= 0; --i) {
    if (i < d) acc = acc * P1;
    if (acc.is_zero()) acc = HomPoly(q * (d - i));
    if (it != ts.end() && static_cast<int>(it->mono.e[0]) == i) {
      auto run_end = it;
      while (run_end != ts.end() && static_cast<int>(run_end->mono.e[0]) == i) ++run_end;
      acc += eval_slice(it, run_end, d - i);
      it = run_end;
    }
  }
  if (acc.is_zero()) return HomPoly(D);
  return acc;
}

// Element of Z[tau] as two mpz; scratch-friendly for the dense kernels.
struct ZTau {
  mpz_class a, b;
  bool is_zero() const { return sgn(a) == 0 && sgn(b) == 0; }
  void set_zero() {
    a = 0;
    b = 0;
  }
};

// acc += x * y
inline void zt_addmul(ZTau& acc, const ZTau& x, const ZTau& y) {
  mpz_addmul(acc.a.get_mpz_t(), x.a.get_mpz_t(), y.a.get_mpz_t());
  mpz_submul(acc.a.get_mpz_t(), x.b.get_mpz_t(), y.b.get_mpz_t());
  mpz_addmul(acc.b.get_mpz_t(), x.a.get_mpz_t(), y.b.get_mpz_t());
  mpz_addmul(acc.b.get_mpz_t(), x.b.get_mpz_t(), y.a.get_mpz_t());
  mpz_submul(acc.b.get_mpz_t(), x.b.get_mpz_t(), y.b.get_mpz_t());
}

inline bool all_integral(const HomPoly& f) {
  return std::all_of(f.terms().begin(), f.terms().end(), [](const Term& t) { return t.coef.is_integral(); });
}

struct ZTerm {
  int i, j;  // exponents of x and y
  ZTau c;
};

inline std::vector<ZTerm> to_zterms(const HomPoly& f) {
  std::vector<ZTerm> out;
  out.reserve(f.size());
  for (const auto& t : f.terms()) {
    out.push_back({static_cast<int>(t.mono.e[0]), static_cast<int>(t.mono.e[1]),
                   {t.coef.a().get_num(), t.coef.b().get_num()}});
  }
  return out;
}

// Homogeneous polynomial over Z[tau] of degree deg <= cap, stored densely:
// cell (i, j) holds the coefficient of x^i y^j z^(deg-i-j).
class DenseZ {
 public:
  explicit DenseZ(int cap) : stride_(cap + 1), cells_(static_cast<std::size_t>(stride_) * stride_) {}

  int degree() const { return deg_; }
  ZTau& at(int i, int j) { return cells_[static_cast<std::size_t>(i) * stride_ + j]; }
  const ZTau& at(int i, int j) const { return cells_[static_cast<std::size_t>(i) * stride_ + j]; }

  void reset(int deg) {
    deg_ = deg;
    for (int i = 0; i <= deg; ++i) {
      for (int j = 0; j + i <= deg; ++j) at(i, j).set_zero();
    }
  }

  // *this = src * p
  void assign_product(const DenseZ& src, const std::vector<ZTerm>& p, int pdeg) {
    reset(src.deg_ + pdeg);
    for (int i = 0; i <= src.deg_; ++i) {
      for (int j = 0; i + j <= src.deg_; ++j) {
        const ZTau& c = src.at(i, j);
        if (c.is_zero()) continue;
        for (const auto& t : p) zt_addmul(at(i + t.i, j + t.j), c, t.c);
      }
    }
  }

  // *this += k * p, p of the same degree
  void add_scaled(const std::vector<ZTerm>& p, const ZTau& k) {
    for (const auto& t : p) zt_addmul(at(t.i, t.j), t.c, k);
  }

  void add(const DenseZ& o) {
    for (int i = 0; i <= deg_; ++i) {
      for (int j = 0; i + j <= deg_; ++j) {
        const ZTau& c = o.at(i, j);
        if (c.is_zero()) continue;
        ZTau& r = at(i, j);
        r.a += c.a;
        r.b += c.b;
      }
    }
  }

  HomPoly to_hompoly() const {
    std::vector<Term> ts;
    for (int i = deg_; i >= 0; --i) {
      for (int j = deg_ - i; j >= 0; --j) {
        const ZTau& c = at(i, j);
        if (c.is_zero()) continue;
        ts.push_back({Monomial(i, j, deg_ - i - j), QTauScalar(mpq_class(c.a), mpq_class(c.b))});
      }
    }
    return HomPoly::from_terms(deg_, std::move(ts));
  }

 private:
  int stride_;
  int deg_ = 0;
  std::vector<ZTau> cells_;
};

// Same Horner scheme as pullback_sparse, over Z[tau] with dense buffers.
inline HomPoly pullback_dense(const HomPoly& f, const std::array<HomPoly, 3>& map, int q) {
  const int d = f.degree();
  const int D = q * d;
  const std::vector<ZTerm> P1 = to_zterms(map[0]), P2 = to_zterms(map[1]);
  std::vector<std::vector<ZTerm>> p3pow{to_zterms(HomPoly::constant(1))};
  HomPoly p3_last = HomPoly::constant(1);
  auto p3 = [&](int k) -> const std::vector<ZTerm>& {
    while (static_cast<int>(p3pow.size()) <= k) {
      p3_last = p3_last * map[2];
      p3pow.push_back(to_zterms(p3_last));
    }
    return p3pow[k];
  };

  DenseZ acc(D), acc2(D), inner(D), inner2(D);
  acc.reset(0);
  const auto& ts = f.terms();
  std::size_t it = 0;
  for (int i = d; i >= 0; --i) {
    if (i < d) {
      acc2.assign_product(acc, P1, q);
      std::swap(acc, acc2);
    }
    if (it < ts.size() && static_cast<int>(ts[it].mono.e[0]) == i) {
      const int e = d - i;
      inner.reset(0);
      for (int j = e; j >= 0; --j) {
        if (j < e) {
          inner2.assign_product(inner, P2, q);
          std::swap(inner, inner2);
        }
        if (it < ts.size() && static_cast<int>(ts[it].mono.e[0]) == i &&
            static_cast<int>(ts[it].mono.e[1]) == j) {
          const QTauScalar& c = ts[it].coef;
          inner.add_scaled(p3(e - j), ZTau{c.a().get_num(), c.b().get_num()});
          ++it;
        }
      }
      acc.add(inner);
    }
  }
  return acc.to_hompoly();
}

}  // namespace detail

// Substitutes map[0], map[1], map[2] for x, y, z. All components must have
// the same degree q (zero components are accepted for any q).
inline HomPoly pullback(const HomPoly& f, const std::array<HomPoly, 3>& map) {
  const int q = detail::pullback_degree(map);
  if (f.is_zero()) return HomPoly(q * f.degree());
  if (q > 0 && detail::all_integral(f) && detail::all_integral(map[0]) && detail::all_integral(map[1]) &&
      detail::all_integral(map[2])) {
    return detail::pullback_dense(f, map, q);
  }
  return detail::pullback_sparse(f, map);
}

namespace detail {

// Division by a linear form with unit pivot coefficient, over Z[tau] on
// dense (pivot exponent, second exponent) grids of a fixed stride.
struct UnitLinearDivider {
  int p, s, r;
  ZTau inv, ns, nr;
  bool has_s, has_r;
  std::size_t stride;

  UnitLinearDivider(const std::array<QTauScalar, 3>& L, int p_, int s_, int r_, int cap)
      : p(p_), s(s_), r(r_), stride(static_cast<std::size_t>(cap) + 1) {
    auto z = [](const QTauScalar& c) { return ZTau{c.a().get_num(), c.b().get_num()}; };
    inv = z(L[p].inverse());
    ns = z(-L[s]);
    nr = z(-L[r]);
    has_s = !L[s].is_zero();
    has_r = !L[r].is_zero();
  }

  std::vector<ZTau> load(const HomPoly& f) const {
    std::vector<ZTau> F(stride * stride);
    for (const auto& t : f.terms()) {
      F[t.mono.e[p] * stride + t.mono.e[s]] = ZTau{t.coef.a().get_num(), t.coef.b().get_num()};
    }
    return F;
  }

  // Q = F / l for F of degree D, or false. Q is overwritten.
  bool divide(const std::vector<ZTau>& F, int D, std::vector<ZTau>& Q) const {
    if (D == 0) return F[0].is_zero();
    ZTau v;
    for (int ep = D - 1; ep >= 0; --ep) {
      for (int es = 0; ep + es <= D - 1; ++es) {
        v = F[(ep + 1) * stride + es];
        if (ep + 1 <= D - 1) {
          if (es >= 1 && has_s) zt_addmul(v, ns, Q[(ep + 1) * stride + es - 1]);
          if (ep + 1 + es <= D - 1 && has_r) zt_addmul(v, nr, Q[(ep + 1) * stride + es]);
        }
        ZTau& q = Q[ep * stride + es];
        q.set_zero();
        if (!v.is_zero()) zt_addmul(q, v, inv);
      }
    }
    for (int es = 0; es <= D; ++es) {
      v = F[es];
      if (es >= 1 && has_s) zt_addmul(v, ns, Q[es - 1]);
      if (es <= D - 1 && has_r) zt_addmul(v, nr, Q[es]);
      if (!v.is_zero()) return false;
    }
    return true;
  }

  HomPoly store(const std::vector<ZTau>& Q, int D) const {
    std::vector<Term> ts;
    for (int ep = 0; ep <= D; ++ep) {
      for (int es = 0; ep + es <= D; ++es) {
        const ZTau& c = Q[ep * stride + es];
        if (c.is_zero()) continue;
        Monomial m;
        m.e[p] = ep;
        m.e[s] = es;
        m.e[r] = D - ep - es;
        ts.push_back({m, QTauScalar(mpq_class(c.a), mpq_class(c.b))});
      }
    }
    return HomPoly::from_terms(D, std::move(ts));
  }
};

inline std::optional<UnitLinearDivider> unit_divider(const HomPoly& f, const HomPoly& l) {
  std::array<QTauScalar, 3> L{l.coefficient({1, 0, 0}), l.coefficient({0, 1, 0}), l.coefficient({0, 0, 1})};
  const int p = !L[0].is_zero() ? 0 : !L[1].is_zero() ? 1 : 2;
  const int s = p == 0 ? 1 : 0;
  if (L[p].norm() != 1 || !all_integral(f) || !all_integral(l)) return std::nullopt;
  return UnitLinearDivider(L, p, s, 3 - p - s, f.degree());
}

// f / l for a linear form l, solving for the quotient one layer of the
// pivot variable at a time; the bottom layer is the remainder check.
inline std::optional<HomPoly> exact_div_linear(const HomPoly& f, const HomPoly& l) {
  const int D = f.degree();
  std::array<QTauScalar, 3> L{l.coefficient({1, 0, 0}), l.coefficient({0, 1, 0}), l.coefficient({0, 0, 1})};
  const int p = !L[0].is_zero() ? 0 : !L[1].is_zero() ? 1 : 2;
  const int s = p == 0 ? 1 : 0;
  const int r = 3 - p - s;
  const std::size_t stride = static_cast<std::size_t>(D) + 1;
  if (auto u = unit_divider(f, l)) {
    std::vector<ZTau> F = u->load(f), Q(F.size());
    if (!u->divide(F, D, Q)) return std::nullopt;
    return u->store(Q, D - 1);
  }
  // cells indexed by (exponent of p, exponent of s)
  std::vector<QTauScalar> F(stride * stride), Q(stride * stride);
  for (const auto& t : f.terms()) F[t.mono.e[p] * stride + t.mono.e[s]] = t.coef;
  const QTauScalar inv = L[p].inverse();
  for (int ep = D - 1; ep >= 0; --ep) {
    for (int es = 0; ep + es <= D - 1; ++es) {
      QTauScalar v = F[(ep + 1) * stride + es];
      if (ep + 1 <= D - 1) {
        if (es >= 1 && !L[s].is_zero()) v -= L[s] * Q[(ep + 1) * stride + es - 1];
        if (ep + 1 + es <= D - 1 && !L[r].is_zero()) v -= L[r] * Q[(ep + 1) * stride + es];
      }
      if (!v.is_zero()) Q[ep * stride + es] = v * inv;
    }
  }
  for (int es = 0; es <= D; ++es) {
    QTauScalar v;
    if (es >= 1) v.add_product(L[s], Q[es - 1]);
    if (es <= D - 1) v.add_product(L[r], Q[es]);
    if (v != F[es]) return std::nullopt;
  }
  std::vector<Term> ts;
  for (int ep = 0; ep <= D - 1; ++ep) {
    for (int es = 0; ep + es <= D - 1; ++es) {
      QTauScalar& c = Q[ep * stride + es];
      if (c.is_zero()) continue;
      Monomial m;
      m.e[p] = ep;
      m.e[s] = es;
      m.e[r] = D - 1 - ep - es;
      ts.push_back({m, std::move(c)});
    }
  }
  return HomPoly::from_terms(D - 1, std::move(ts));
}

}  // namespace detail

// h with f = g * h, or nullopt when g does not divide f.
inline std::optional<HomPoly> exact_div(const HomPoly& f, const HomPoly& g) {
  if (g.is_zero()) throw std::domain_error("exact_div: division by zero polynomial");
  const int qd = f.degree() - g.degree();
  if (f.is_zero()) return HomPoly(std::max(qd, 0));
  if (qd < 0) return std::nullopt;
  if (g.degree() == 1) return detail::exact_div_linear(f, g);
  const Term& lg = g.leading_term();
  const QTauScalar lg_inv = lg.coef.inverse();
  std::map<Monomial, QTauScalar, std::greater<>> rem;
  for (const auto& t : f.terms()) rem.emplace(t.mono, t.coef);
  std::vector<Term> quot;
  while (!rem.empty()) {
    auto top = rem.begin();
    if (!lg.mono.divides(top->first)) return std::nullopt;
    Term qt{top->first / lg.mono, top->second * lg_inv};
    for (const auto& t : g.terms()) {
      Monomial m = t.mono * qt.mono;
      auto [pos, inserted] = rem.try_emplace(m);
      pos->second.add_product(t.coef, -qt.coef);
      if (pos->second.is_zero()) rem.erase(pos);
    }
    quot.push_back(std::move(qt));
  }
  return HomPoly::from_terms(qd, std::move(quot));
}

// Largest k with g^k | f (f != 0); f is replaced by f / g^k.
inline int divisibility_order(HomPoly& f, const HomPoly& g) {
  if (g.degree() == 1 && !f.is_zero()) {
    if (auto u = detail::unit_divider(f, g)) {
      std::vector<detail::ZTau> F = u->load(f), Q(F.size());
      int D = f.degree(), k = 0;
      while (D > 0 && u->divide(F, D, Q)) {
        std::swap(F, Q);
        --D;
        ++k;
      }
      if (k > 0) f = u->store(F, D);
      return k;
    }
  }
  int k = 0;
  while (true) {
    auto q = exact_div(f, g);
    if (!q) return k;
    f = std::move(*q);
    ++k;
  }
}

inline HomPoly partial(const HomPoly& f, Var v) {
  const int vi = static_cast<int>(v);
  HomPoly r(std::max(f.degree() - 1, 0));
  std::vector<Term> ts;
  for (const auto& t : f.terms()) {
    if (t.mono.e[vi] == 0) continue;
    Monomial m = t.mono;
    m.e[vi] -= 1;
    ts.push_back({m, t.coef * QTauScalar(static_cast<long>(t.mono.e[vi]))});
  }
  if (ts.empty()) return r;
  return HomPoly::from_terms(f.degree() - 1, std::move(ts));
}

// ---------------------------------------------------------------------------
// Projective points

struct ProjPoint {
  std::array<QTauScalar, 3> c;

  ProjPoint(QTauScalar x, QTauScalar y, QTauScalar z) : c{std::move(x), std::move(y), std::move(z)} {
    if (c[0].is_zero() && c[1].is_zero() && c[2].is_zero()) {
      throw std::domain_error("ProjPoint: all coordinates zero");
    }
  }

  // equal up to a nonzero scalar
  friend bool operator==(const ProjPoint& p, const ProjPoint& q) {
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        if (p.c[i] * q.c[j] != p.c[j] * q.c[i]) return false;
      }
    }
    return true;
  }

  std::string to_string(const std::string& tau = "t") const {
    return "(" + c[0].to_string(tau) + ":" + c[1].to_string(tau) + ":" + c[2].to_string(tau) + ")";
  }
};

inline bool vanishes_at(const HomPoly& f, const ProjPoint& p) { return f.evaluate(p.c).is_zero(); }

// Order of vanishing of f at p: translate p to the coordinate point of the
// chart (last nonzero coordinate of p), then read off the lowest degree in
// the other two variables.
inline int multiplicity_at(const HomPoly& f, const ProjPoint& p) {
  if (f.is_zero()) throw std::domain_error("multiplicity_at: zero polynomial");
  int chart = 2;
  while (p.c[chart].is_zero()) --chart;
  const QTauScalar inv = p.c[chart].inverse();
  std::array<HomPoly, 3> sub{HomPoly::var(Var::X), HomPoly::var(Var::Y), HomPoly::var(Var::Z)};
  const HomPoly w = HomPoly::var(static_cast<Var>(chart));
  for (int v = 0; v < 3; ++v) {
    if (v != chart && !p.c[v].is_zero()) sub[v].add_scaled(w, p.c[v] * inv);
  }
  const HomPoly g = pullback(f, sub);
  int mult = f.degree();
  for (const auto& t : g.terms()) mult = std::min(mult, f.degree() - static_cast<int>(t.mono.e[chart]));
  return mult;
}

// ---------------------------------------------------------------------------
// Scalar normalisation and linear algebra on coefficient vectors

// Unique representative of the line spanned by f: coefficients in Z(tau)
// with content 1 and canonical leading coefficient (a > b >= 0).
inline HomPoly normalized(const HomPoly& f) {
  if (f.is_zero()) return f;
  mpz_class den = 1;
  for (const auto& t : f.terms()) {
    den = lcm(den, t.coef.a().get_den());
    den = lcm(den, t.coef.b().get_den());
  }
  std::vector<detail::EisInt> ints;
  ints.reserve(f.size());
  mpz_class g = 0;
  for (const auto& t : f.terms()) {
    mpq_class a = t.coef.a() * den, b = t.coef.b() * den;
    ints.push_back({a.get_num(), b.get_num()});
    g = gcd(g, ints.back().a);
    g = gcd(g, ints.back().b);
  }
  for (auto& e : ints) {
    mpz_divexact(e.a.get_mpz_t(), e.a.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(e.b.get_mpz_t(), e.b.get_mpz_t(), g.get_mpz_t());
  }
  detail::EisInt eg{};
  for (const auto& e : ints) {
    eg = detail::eis_gcd(e, eg);
    if (eg.norm() == 1) break;
  }
  QTauScalar scale = eg.to_scalar().inverse();
  std::vector<Term> ts;
  ts.reserve(f.size());
  for (std::size_t k = 0; k < ints.size(); ++k) {
    ts.push_back({f.terms()[k].mono, ints[k].to_scalar() * scale});
  }
  QTauScalar u = canonical_unit_factor(ts.front().coef);
  for (auto& t : ts) t.coef *= u;
  return HomPoly::from_terms(f.degree(), std::move(ts));
}

// lambda with f = lambda * g, if one exists (g != 0).
inline std::optional<QTauScalar> proportionality(const HomPoly& f, const HomPoly& g) {
  if (g.is_zero()) throw std::domain_error("proportionality: zero divisor polynomial");
  if (f.is_zero()) return QTauScalar{};
  if (f.degree() != g.degree() || f.size() != g.size()) return std::nullopt;
  QTauScalar lambda = f.terms()[0].coef / g.terms()[0].coef;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f.terms()[k].mono != g.terms()[k].mono) return std::nullopt;
    if (f.terms()[k].coef != lambda * g.terms()[k].coef) return std::nullopt;
  }
  return lambda;
}

inline bool linearly_independent(const HomPoly& f, const HomPoly& g) {
  if (f.is_zero() || g.is_zero()) return false;
  if (f.degree() != g.degree()) return true;
  return !proportionality(f, g).has_value();
}

// (c1, c2) with h = c1 f + c2 g, or nullopt when h is outside the span.
inline std::optional<std::pair<QTauScalar, QTauScalar>> in_span(const HomPoly& h, const HomPoly& f,
                                                                 const HomPoly& g) {
  if (f.degree() != g.degree() || (!h.is_zero() && h.degree() != f.degree())) {
    throw std::domain_error("in_span: degree mismatch");
  }
  if (!linearly_independent(f, g)) throw std::domain_error("in_span: generators are dependent");
  // Union of supports, with the (f, g) coefficient pair for each monomial.
  std::vector<std::pair<QTauScalar, QTauScalar>> rows;
  std::vector<Monomial> monos;
  {
    auto i = f.terms().begin();
    auto j = g.terms().begin();
    while (i != f.terms().end() || j != g.terms().end()) {
      if (j == g.terms().end() || (i != f.terms().end() && i->mono > j->mono)) {
        rows.emplace_back(i->coef, QTauScalar{});
        monos.push_back(i->mono);
        ++i;
      } else if (i == f.terms().end() || j->mono > i->mono) {
        rows.emplace_back(QTauScalar{}, j->coef);
        monos.push_back(j->mono);
        ++j;
      } else {
        rows.emplace_back(i->coef, j->coef);
        monos.push_back(i->mono);
        ++i;
        ++j;
      }
    }
  }
  // Two rows with nonzero determinant exist since f, g are independent.
  std::size_t r1 = 0;
  std::size_t r2 = rows.size();
  for (std::size_t k = 1; k < rows.size(); ++k) {
    QTauScalar det = rows[r1].first * rows[k].second - rows[r1].second * rows[k].first;
    if (!det.is_zero()) {
      r2 = k;
      break;
    }
  }
  if (r2 == rows.size()) throw std::logic_error("in_span: no pivot rows");
  const auto& [a11, a12] = rows[r1];
  const auto& [a21, a22] = rows[r2];
  QTauScalar det = a11 * a22 - a12 * a21;
  QTauScalar h1 = h.coefficient(monos[r1]);
  QTauScalar h2 = h.coefficient(monos[r2]);
  QTauScalar c1 = (h1 * a22 - a12 * h2) / det;
  QTauScalar c2 = (a11 * h2 - h1 * a21) / det;
  HomPoly comb = f * c1;
  comb.add_scaled(g, c2);
  if (!(comb == h)) return std::nullopt;
  return std::make_pair(c1, c2);
}

// s with s^3 = f exactly, by lifting term by term from the graded-lex
// leading term. The leading coefficient of s lies in the cone a > 0, b >= 0.
inline std::optional<HomPoly> cube_root(const HomPoly& f) {
  if (f.is_zero()) throw std::domain_error("cube_root: zero polynomial");
  if (f.degree() % 3 != 0) return std::nullopt;
  const Term& lt = f.leading_term();
  if (lt.mono.e[0] % 3 || lt.mono.e[1] % 3 || lt.mono.e[2] % 3) return std::nullopt;
  auto lc = cube_root(lt.coef);
  if (!lc) return std::nullopt;
  const int e = f.degree() / 3;
  const Monomial lead_mono(lt.mono.e[0] / 3, lt.mono.e[1] / 3, lt.mono.e[2] / 3);
  HomPoly s = HomPoly::monomial(lead_mono, *lc);
  HomPoly s2 = s * s;
  HomPoly r = f - s2 * s;
  const QTauScalar denom_inv = (QTauScalar(3) * *lc * *lc).inverse();
  const Monomial lead_sq = lead_mono * lead_mono;
  while (!r.is_zero()) {
    const Term& top = r.leading_term();
    if (!lead_sq.divides(top.mono)) return std::nullopt;
    Monomial um = top.mono / lead_sq;
    if (!(um < lead_mono) || static_cast<int>(um.degree()) != e) return std::nullopt;
    QTauScalar uc = top.coef * denom_inv;
    // (s + u)^3 - s^3 = 3 s^2 u + 3 s u^2 + u^3
    HomPoly u = HomPoly::monomial(um, uc);
    HomPoly su = s.times_term(um, uc);
    HomPoly u2 = u * u;
    r.add_scaled(s2.times_term(um, uc), -3);
    r.add_scaled(su.times_term(um, uc), -3);
    r.add_scaled(u2.times_term(um, uc), -1);
    s2.add_scaled(su, 2);
    s2 += u2;
    s += u;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Projective 1-forms A dx + B dy + C dz

struct OneForm {
  HomPoly A, B, C;

  OneForm() = default;
  OneForm(HomPoly a, HomPoly b, HomPoly c) : A(std::move(a)), B(std::move(b)), C(std::move(c)) {
    int d = -1;
    for (const HomPoly* p : {&A, &B, &C}) {
      if (p->is_zero()) continue;
      if (d < 0) {
        d = p->degree();
      } else if (p->degree() != d) {
        throw std::domain_error("OneForm: coefficients of different degree");
      }
    }
  }

  int degree() const {
    for (const HomPoly* p : {&A, &B, &C}) {
      if (!p->is_zero()) return p->degree();
    }
    return A.degree();
  }

  // x A + y B + z C
  HomPoly euler_contraction() const {
    HomPoly r = HomPoly::var(Var::X) * A;
    r += HomPoly::var(Var::Y) * B;
    r += HomPoly::var(Var::Z) * C;
    return r;
  }
  bool satisfies_euler() const { return euler_contraction().is_zero(); }

  friend OneForm operator+(const OneForm& l, const OneForm& r) {
    return {l.A + r.A, l.B + r.B, l.C + r.C};
  }
  friend OneForm operator*(const QTauScalar& c, const OneForm& w) {
    return {w.A * c, w.B * c, w.C * c};
  }
  friend OneForm operator*(const HomPoly& f, const OneForm& w) {
    return {f * w.A, f * w.B, f * w.C};
  }
  friend bool operator==(const OneForm& l, const OneForm& r) {
    return l.A == r.A && l.B == r.B && l.C == r.C;
  }
};

// The three 2x2 minors of the coefficient matrix of w1, w2.
inline std::array<HomPoly, 3> wedge_minors(const OneForm& w1, const OneForm& w2) {
  return {w1.A * w2.B - w2.A * w1.B, w1.A * w2.C - w2.A * w1.C, w1.B * w2.C - w2.B * w1.C};
}

inline bool wedge_vanishes(const OneForm& w1, const OneForm& w2) {
  for (const auto& m : wedge_minors(w1, w2)) {
    if (!m.is_zero()) return false;
  }
  return true;
}

}  // namespace lnpencil
