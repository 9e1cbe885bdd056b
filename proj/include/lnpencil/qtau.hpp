// Exact arithmetic in the cyclotomic field Q(tau), tau^2 + tau + 1 = 0.
//
// An element is stored as a + b*tau with a, b arbitrary precision
// rationals. The ring of integers Z(tau) (Eisenstein integers) is
// Euclidean, which gives gcds for content removal and an exact cube
// root test used by the polynomial kernel.
#pragma once

#include <gmpxx.h>

#include <array>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace lnpencil {

class QTauScalar {
 public:
  QTauScalar() = default;
  QTauScalar(long a) : a_(a) {}  // NOLINT(google-explicit-constructor)
  explicit QTauScalar(mpq_class a) : a_(std::move(a)) { a_.canonicalize(); }
  QTauScalar(mpq_class a, mpq_class b) : a_(std::move(a)), b_(std::move(b)) {
    a_.canonicalize();
    b_.canonicalize();
  }

  static QTauScalar tau() { return {0, 1}; }
  static QTauScalar tau2() { return {-1, -1}; }

  const mpq_class& a() const { return a_; }
  const mpq_class& b() const { return b_; }

  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
  bool is_one() const { return a_ == 1 && sgn(b_) == 0; }
  bool is_rational() const { return sgn(b_) == 0; }
  bool is_integral() const {
    return a_.get_den() == 1 && b_.get_den() == 1;
  }

  // a + b*tau^2 = (a - b) - b*tau
  QTauScalar conj() const { return {a_ - b_, -b_}; }
  // N(a + b tau) = a^2 - ab + b^2
  mpq_class norm() const { return a_ * a_ - a_ * b_ + b_ * b_; }
  // Trace over Q: x + conj(x) = 2a - b.
  mpq_class trace() const { return 2 * a_ - b_; }

  QTauScalar inverse() const {
    if (is_zero()) throw std::domain_error("QTauScalar: division by zero");
    mpq_class n = norm();
    QTauScalar c = conj();
    return {c.a_ / n, c.b_ / n};
  }

  QTauScalar operator-() const { return {-a_, -b_}; }

  QTauScalar& operator+=(const QTauScalar& o) {
    a_ += o.a_;
    b_ += o.b_;
    return *this;
  }
  QTauScalar& operator-=(const QTauScalar& o) {
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
  }
  QTauScalar& operator*=(const QTauScalar& o) {
    // (a + b t)(c + d t) = (ac - bd) + (ad + bc - bd) t
    mpq_class bd = b_ * o.b_;
    mpq_class na = a_ * o.a_ - bd;
    mpq_class nb = a_ * o.b_ + b_ * o.a_ - bd;
    a_ = std::move(na);
    b_ = std::move(nb);
    return *this;
  }
  QTauScalar& operator/=(const QTauScalar& o) { return *this *= o.inverse(); }

  // this += x * y without building a temporary QTauScalar.
  void add_product(const QTauScalar& x, const QTauScalar& y) {
    thread_local mpq_class t1, t2;
    // real part: xa*ya - xb*yb
    mpq_mul(t1.get_mpq_t(), x.a_.get_mpq_t(), y.a_.get_mpq_t());
    mpq_add(a_.get_mpq_t(), a_.get_mpq_t(), t1.get_mpq_t());
    mpq_mul(t2.get_mpq_t(), x.b_.get_mpq_t(), y.b_.get_mpq_t());
    mpq_sub(a_.get_mpq_t(), a_.get_mpq_t(), t2.get_mpq_t());
    // tau part: xa*yb + xb*ya - xb*yb
    mpq_sub(b_.get_mpq_t(), b_.get_mpq_t(), t2.get_mpq_t());
    mpq_mul(t1.get_mpq_t(), x.a_.get_mpq_t(), y.b_.get_mpq_t());
    mpq_add(b_.get_mpq_t(), b_.get_mpq_t(), t1.get_mpq_t());
    mpq_mul(t1.get_mpq_t(), x.b_.get_mpq_t(), y.a_.get_mpq_t());
    mpq_add(b_.get_mpq_t(), b_.get_mpq_t(), t1.get_mpq_t());
  }

  friend QTauScalar operator+(QTauScalar l, const QTauScalar& r) { return l += r; }
  friend QTauScalar operator-(QTauScalar l, const QTauScalar& r) { return l -= r; }
  friend QTauScalar operator*(QTauScalar l, const QTauScalar& r) { return l *= r; }
  friend QTauScalar operator/(QTauScalar l, const QTauScalar& r) { return l /= r; }
  friend bool operator==(const QTauScalar& l, const QTauScalar& r) {
    return l.a_ == r.a_ && l.b_ == r.b_;
  }
  friend bool operator!=(const QTauScalar& l, const QTauScalar& r) { return !(l == r); }

  // Plain text rendering; `tau` is the symbol used for the generator.
  std::string to_string(const std::string& tau = "t") const {
    if (sgn(b_) == 0) return a_.get_str();
    std::string tb;
    if (b_ == 1) {
      tb = tau;
    } else if (b_ == -1) {
      tb = "-" + tau;
    } else {
      tb = b_.get_str() + "*" + tau;
    }
    if (sgn(a_) == 0) return tb;
    std::string s = a_.get_str();
    if (tb[0] == '-') return s + tb;
    return s + "+" + tb;
  }

 private:
  mpq_class a_{0};
  mpq_class b_{0};
};

inline std::ostream& operator<<(std::ostream& os, const QTauScalar& s) {
  return os << s.to_string();
}

// The six units of Z(tau): +-1, +-tau, +-tau^2.
inline const std::array<QTauScalar, 6>& units() {
  static const std::array<QTauScalar, 6> u = {
      QTauScalar(1), QTauScalar(-1), QTauScalar::tau(), -QTauScalar::tau(),
      QTauScalar::tau2(), -QTauScalar::tau2()};
  return u;
}

// Canonical associate: 0 <= arg < 60 degrees, i.e. a > b >= 0.
inline bool is_canonical_unit_rep(const QTauScalar& s) {
  return sgn(s.b()) >= 0 && s.a() > s.b();
}

// The unit u for which u * s is the canonical associate of s (s != 0).
inline QTauScalar canonical_unit_factor(const QTauScalar& s) {
  if (s.is_zero()) throw std::domain_error("canonical_unit_factor: zero");
  for (const auto& u : units()) {
    if (is_canonical_unit_rep(u * s)) return u;
  }
  throw std::logic_error("canonical_unit_factor: no sector matched");
}

namespace detail {

// Eisenstein integer with mpz components, used for gcd computations.
struct EisInt {
  mpz_class a{0}, b{0};

  bool is_zero() const { return sgn(a) == 0 && sgn(b) == 0; }
  mpz_class norm() const { return a * a - a * b + b * b; }
  QTauScalar to_scalar() const { return {mpq_class(a), mpq_class(b)}; }
};

inline mpz_class round_div(const mpz_class& num, const mpz_class& den) {
  // nearest integer to num/den, den > 0
  mpz_class twice = 2 * num + den;
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), twice.get_mpz_t(), mpz_class(2 * den).get_mpz_t());
  return q;
}

inline EisInt eis_mul(const EisInt& x, const EisInt& y) {
  mpz_class bd = x.b * y.b;
  return {x.a * y.a - bd, x.a * y.b + x.b * y.a - bd};
}

// Remainder of x modulo y (y != 0) with N(r) < N(y).
inline EisInt eis_mod(const EisInt& x, const EisInt& y) {
  mpz_class n = y.norm();
  EisInt yc{y.a - y.b, -y.b};
  EisInt num = eis_mul(x, yc);
  EisInt q{round_div(num.a, n), round_div(num.b, n)};
  EisInt qy = eis_mul(q, y);
  return {x.a - qy.a, x.b - qy.b};
}

inline EisInt eis_gcd(EisInt x, EisInt y) {
  while (!y.is_zero()) {
    EisInt r = eis_mod(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return x;
}

inline mpz_class icbrt_floor(const mpz_class& n) {
  // n >= 0
  mpz_class r;
  mpz_root(r.get_mpz_t(), n.get_mpz_t(), 3);
  return r;
}

// Integer roots of s^3 - 3 n0 s - T on a monotone interval [lo, hi].
inline std::optional<mpz_class> monotone_int_root(const mpz_class& n0,
                                                  const mpz_class& T,
                                                  mpz_class lo, mpz_class hi) {
  auto g = [&](const mpz_class& s) -> mpz_class { return s * s * s - 3 * n0 * s - T; };
  if (lo > hi) return std::nullopt;
  mpz_class glo = g(lo), ghi = g(hi);
  if (sgn(glo) == 0) return lo;
  if (sgn(ghi) == 0) return hi;
  if (sgn(glo) == sgn(ghi)) return std::nullopt;
  const int dir = sgn(ghi) > 0 ? 1 : -1;
  while (hi - lo > 1) {
    mpz_class mid = (lo + hi) / 2;
    mpz_class gm = g(mid);
    if (sgn(gm) == 0) return mid;
    if (sgn(gm) == dir) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return std::nullopt;
}

// A cube root in Z(tau) of an Eisenstein integer e, if one exists.
inline std::optional<EisInt> eis_cube_root(const EisInt& e) {
  if (e.is_zero()) return EisInt{};
  mpz_class ne = e.norm();
  mpz_class n0 = icbrt_floor(ne);
  if (n0 * n0 * n0 != ne) return std::nullopt;
  // s = r + conj(r) is an integer root of s^3 - 3 n0 s - tr(e).
  mpz_class T = 2 * e.a - e.b;
  mpz_class sq;
  mpz_sqrt(sq.get_mpz_t(), n0.get_mpz_t());
  mpz_class bound = 2 * sq + 2;
  // g is increasing on integers <= -sq-1, decreasing on [-sq, sq] and
  // increasing on integers >= sq+1.
  const std::array<std::pair<mpz_class, mpz_class>, 3> ranges = {
      std::pair<mpz_class, mpz_class>{-bound, -sq - 1},
      std::pair<mpz_class, mpz_class>{-sq, sq},
      std::pair<mpz_class, mpz_class>{sq + 1, bound}};
  for (const auto& [lo, hi] : ranges) {
    std::optional<mpz_class> s = monotone_int_root(n0, T, lo, hi);
    if (!s) continue;
    const mpz_class& sv = *s;
    mpz_class disc = 12 * n0 - 3 * sv * sv;
    if (sgn(disc) < 0) continue;
    mpz_class rt;
    mpz_sqrt(rt.get_mpz_t(), disc.get_mpz_t());
    if (rt * rt != disc) continue;
    for (int sign : {1, -1}) {
      mpz_class num = 3 * sv + sign * rt;
      if (!mpz_divisible_ui_p(num.get_mpz_t(), 6)) continue;
      mpz_class p = num / 6;
      EisInt r{p, 2 * p - sv};
      EisInt r3 = eis_mul(eis_mul(r, r), r);
      if (r3.a == e.a && r3.b == e.b) return r;
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Cube root in Q(tau); the returned root lies in the cone spanned by 1 and
// tau (a > 0, b >= 0), which singles out one of the three roots.
inline std::optional<QTauScalar> cube_root(const QTauScalar& c) {
  if (c.is_zero()) return QTauScalar{};
  mpz_class den = lcm(c.a().get_den(), c.b().get_den());
  // c = e / den^3 with e = c * den^3 in Z(tau)
  mpz_class den3 = den * den * den;
  mpq_class ea = c.a() * den3, eb = c.b() * den3;
  detail::EisInt e{ea.get_num(), eb.get_num()};
  auto r = detail::eis_cube_root(e);
  if (!r) return std::nullopt;
  QTauScalar root = r->to_scalar() / QTauScalar(mpq_class(den), 0);
  for (const QTauScalar& w : {QTauScalar(1), QTauScalar::tau(), QTauScalar::tau2()}) {
    QTauScalar cand = root * w;
    if (sgn(cand.a()) > 0 && sgn(cand.b()) >= 0) return cand;
  }
  return root;
}

}  // namespace lnpencil
