// Parameters t of the foliation family, the parameter involutions induced by
// the four quadratic maps, projective symmetries, and the norm-descent
// planner that reduces t = m + n tau to one of the two cubic base pencils.
#pragma once

#include "lnpencil/qtau.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lnpencil {

// Wire codes follow the 0/1/2/3 listing convention.
enum class CremonaStep : int { QInf = 0, Q1 = 1, QTau = 2, QTau2 = 3 };

inline constexpr std::array<CremonaStep, 4> kAllSteps = {CremonaStep::QInf, CremonaStep::Q1,
                                                         CremonaStep::QTau, CremonaStep::QTau2};

inline int step_code(CremonaStep s) { return static_cast<int>(s); }

inline CremonaStep step_from_code(int code) {
  if (code < 0 || code > 3) throw std::invalid_argument("step code must be 0..3");
  return static_cast<CremonaStep>(code);
}

inline std::string_view step_name(CremonaStep s) {
  switch (s) {
    case CremonaStep::QInf: return "Q_inf";
    case CremonaStep::Q1: return "Q_1";
    case CremonaStep::QTau: return "Q_tau";
    case CremonaStep::QTau2: return "Q_tau2";
  }
  return "?";
}

// Element of Q(tau) or the point at infinity.
class RationalParam {
 public:
  RationalParam(QTauScalar v) : value_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  RationalParam(long v) : value_(QTauScalar(v)) {}       // NOLINT(google-explicit-constructor)
  static RationalParam infinity() { return RationalParam(); }

  bool is_infinity() const { return !value_.has_value(); }
  const QTauScalar& value() const {
    if (!value_) throw std::domain_error("RationalParam: infinity has no finite value");
    return *value_;
  }

  friend bool operator==(const RationalParam& l, const RationalParam& r) {
    return l.value_ == r.value_;
  }

  std::string to_string() const { return value_ ? value_->to_string() : "inf"; }

 private:
  RationalParam() = default;
  std::optional<QTauScalar> value_;
};

// t = m + n tau in Z(tau), or infinity.
class EisensteinParam {
 public:
  EisensteinParam(std::int64_t m, std::int64_t n) : mn_(std::make_pair(m, n)) {
    constexpr std::int64_t kLimit = std::int64_t{1} << 40;
    if (std::llabs(m) > kLimit || std::llabs(n) > kLimit) {
      throw std::domain_error("EisensteinParam: coefficient outside supported range (2^40)");
    }
  }
  static EisensteinParam infinity() { return EisensteinParam(); }

  bool is_infinity() const { return !mn_.has_value(); }
  std::int64_t m() const { return finite().first; }
  std::int64_t n() const { return finite().second; }

  RationalParam to_rational() const {
    if (!mn_) return RationalParam::infinity();
    return QTauScalar(mpq_class(static_cast<long>(mn_->first)), mpq_class(static_cast<long>(mn_->second)));
  }

  // Integral parameters come back from Q(tau) when both coordinates are integers.
  static std::optional<EisensteinParam> from_rational(const RationalParam& r) {
    if (r.is_infinity()) return infinity();
    const QTauScalar& v = r.value();
    if (!v.is_integral() || !v.a().get_num().fits_slong_p() || !v.b().get_num().fits_slong_p()) {
      return std::nullopt;
    }
    return EisensteinParam(v.a().get_num().get_si(), v.b().get_num().get_si());
  }

  friend bool operator==(const EisensteinParam& l, const EisensteinParam& r) { return l.mn_ == r.mn_; }

  std::string to_string() const {
    if (!mn_) return "inf";
    return to_rational().value().to_string("t");
  }

 private:
  EisensteinParam() = default;
  const std::pair<std::int64_t, std::int64_t>& finite() const {
    if (!mn_) throw std::domain_error("EisensteinParam: infinity has no coordinates");
    return *mn_;
  }
  std::optional<std::pair<std::int64_t, std::int64_t>> mn_;
};

// N(m, n) = m^2 + n^2
inline std::int64_t norm(const EisensteinParam& t) {
  if (t.is_infinity()) throw std::domain_error("norm: undefined at infinity");
  return t.m() * t.m() + t.n() * t.n();
}

// q_1(t) = -t-1, q_tau(t) = -t-tau, q_tau2(t) = -t+1+tau, q_inf(t) = 1/t.
inline RationalParam apply_q(CremonaStep step, const RationalParam& t) {
  if (step == CremonaStep::QInf) {
    if (t.is_infinity()) return QTauScalar{};
    if (t.value().is_zero()) return RationalParam::infinity();
    return t.value().inverse();
  }
  if (t.is_infinity()) return RationalParam::infinity();
  switch (step) {
    case CremonaStep::Q1: return -t.value() - QTauScalar(1);
    case CremonaStep::QTau: return -t.value() - QTauScalar::tau();
    case CremonaStep::QTau2: return -t.value() + QTauScalar(1) + QTauScalar::tau();
    case CremonaStep::QInf: break;
  }
  throw std::logic_error("apply_q: unreachable");
}

enum class ParamSymmetry { Trivolution, InvT, Negation };

// Trivolution: t -> tau t. InvT: t -> (t+2)/(t-1). Negation: t -> -t.
inline RationalParam apply_symmetry(ParamSymmetry sym, const RationalParam& t) {
  switch (sym) {
    case ParamSymmetry::Trivolution:
      if (t.is_infinity()) return t;
      return QTauScalar::tau() * t.value();
    case ParamSymmetry::InvT: {
      if (t.is_infinity()) return 1;
      QTauScalar den = t.value() - QTauScalar(1);
      if (den.is_zero()) return RationalParam::infinity();
      return (t.value() + QTauScalar(2)) / den;
    }
    case ParamSymmetry::Negation:
      if (t.is_infinity()) return t;
      return -t.value();
  }
  throw std::logic_error("apply_symmetry: unreachable");
}

enum class BasePencil { F1, FInf };

inline std::string_view base_name(BasePencil b) { return b == BasePencil::F1 ? "F1" : "Finf"; }

inline RationalParam base_parameter(BasePencil b) {
  return b == BasePencil::F1 ? RationalParam(1) : RationalParam::infinity();
}

struct DescentPlan {
  EisensteinParam t;
  std::vector<CremonaStep> steps;  // applied left to right to the base pencil
  BasePencil base;
};

// Mirrors the reference listing: while |m|+|n| > 1 apply q_tau2 when
// m+n > 1, else q_1 when m <= n, else q_tau; then close with the base
// case. The recorded steps are reversed into application order.
inline DescentPlan plan_descent(const EisensteinParam& t) {
  if (t.is_infinity()) return {t, {}, BasePencil::FInf};
  std::int64_t m = t.m(), n = t.n();
  std::vector<CremonaStep> rec;
  while (std::llabs(m) + std::llabs(n) > 1) {
    if (m + n > 1) {
      m = -m + 1;
      n = -n + 1;
      rec.push_back(CremonaStep::QTau2);
    } else if (m <= n) {
      m = -m - 1;
      n = -n;
      rec.push_back(CremonaStep::Q1);
    } else {
      m = -m;
      n = -n - 1;
      rec.push_back(CremonaStep::QTau);
    }
  }
  BasePencil base = BasePencil::FInf;
  if (m == 0 && n == 0) {
    rec.push_back(CremonaStep::QInf);
  } else if (m == -1 && n == 0) {
    rec.push_back(CremonaStep::Q1);
    rec.push_back(CremonaStep::QInf);
  } else if (m == 1 && n == 0) {
    base = BasePencil::F1;
  } else if (m == 0 && n == -1) {
    rec.push_back(CremonaStep::QTau);
    rec.push_back(CremonaStep::QInf);
  } else {  // (0, 1)
    rec.push_back(CremonaStep::QTau2);
    base = BasePencil::F1;
  }
  std::reverse(rec.begin(), rec.end());
  return {t, std::move(rec), base};
}

inline RationalParam replay_plan(const DescentPlan& plan) {
  RationalParam t = base_parameter(plan.base);
  for (CremonaStep s : plan.steps) t = apply_q(s, t);
  return t;
}

inline std::vector<int> step_codes(const std::vector<CremonaStep>& steps) {
  std::vector<int> out;
  out.reserve(steps.size());
  for (CremonaStep s : steps) out.push_back(step_code(s));
  return out;
}

}  // namespace lnpencil
