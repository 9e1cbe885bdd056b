// Degree and multiplicity bookkeeping [d, m1, mtau, mtau2, minf] for the
// pencils of the family, and how each quadratic map rewrites it.
#pragma once

#include "lnpencil/eisenstein_param.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lnpencil {

class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PencilData {
  std::int64_t d = 0;
  std::int64_t m1 = 0;
  std::int64_t mtau = 0;
  std::int64_t mtau2 = 0;
  std::int64_t minf = 0;

  std::array<std::int64_t, 5> as_array() const { return {d, m1, mtau, mtau2, minf}; }
  // multiplicity at the triple with index 0..3 (1, tau, tau^2, inf)
  std::int64_t multiplicity(int triple) const { return as_array()[1 + triple]; }

  friend bool operator==(const PencilData&, const PencilData&) = default;

  // "[d, m1, mtau, mtau2, minf]"
  std::string to_string() const {
    return "[" + std::to_string(d) + ", " + std::to_string(m1) + ", " + std::to_string(mtau) + ", " +
           std::to_string(mtau2) + ", " + std::to_string(minf) + "]";
  }
};

inline PencilData base_data(BasePencil b) {
  if (b == BasePencil::F1) return {3, 0, 1, 1, 1};
  return {3, 1, 1, 1, 0};
}

inline PencilData transform_data(CremonaStep step, const PencilData& D) {
  PencilData r;
  switch (step) {
    case CremonaStep::Q1:
      r = {2 * D.d - 3 * D.m1, D.d - 2 * D.m1, D.mtau2, D.mtau, D.minf};
      break;
    case CremonaStep::QTau:
      r = {2 * D.d - 3 * D.mtau, D.mtau2, D.d - 2 * D.mtau, D.m1, D.minf};
      break;
    case CremonaStep::QTau2:
      r = {2 * D.d - 3 * D.mtau2, D.mtau, D.m1, D.d - 2 * D.mtau2, D.minf};
      break;
    case CremonaStep::QInf:
      r = {2 * D.d - 3 * D.minf, D.m1, D.mtau2, D.mtau, D.d - 2 * D.minf};
      break;
  }
  for (auto v : r.as_array()) {
    if (v < 0) {
      throw InconsistencyError("transform_data: " + std::string(step_name(step)) + " on " +
                               D.to_string() + " gives a negative entry");
    }
  }
  return r;
}

struct DataResult {
  DescentPlan plan;
  PencilData data;
  std::vector<PencilData> trace;  // one list per applied step
};

inline DataResult data_for_plan(const DescentPlan& plan) {
  PencilData D = base_data(plan.base);
  std::vector<PencilData> trace;
  trace.reserve(plan.steps.size());
  for (CremonaStep s : plan.steps) {
    D = transform_data(s, D);
    trace.push_back(D);
  }
  return {plan, D, std::move(trace)};
}

inline DataResult data_for(const EisensteinParam& t) { return data_for_plan(plan_descent(t)); }

// Effect of t -> tau t: (m1, mtau, mtau2) -> (mtau2, m1, mtau).
inline PencilData data_symmetry_trivolution(const PencilData& D) {
  return {D.d, D.mtau2, D.m1, D.mtau, D.minf};
}

struct DataInvariantReport {
  bool bezout = false;      // d^2 = 3 sum m_i^2
  bool genus_one = false;   // (d-1)(d-2)/2 - 3 sum m_i(m_i-1)/2 = 1
  bool degree_mod3 = false; // 3 | d
  bool nonnegative = false;

  bool passed() const { return bezout && genus_one && degree_mod3 && nonnegative; }
};

inline DataInvariantReport check_data_invariants(const PencilData& D) {
  using i128 = __int128;
  DataInvariantReport r;
  const auto a = D.as_array();
  r.nonnegative = D.d >= 3 && D.m1 >= 0 && D.mtau >= 0 && D.mtau2 >= 0 && D.minf >= 0;
  i128 sq = 0, pairs = 0;
  for (int k = 1; k < 5; ++k) {
    sq += static_cast<i128>(a[k]) * a[k];
    pairs += static_cast<i128>(a[k]) * (a[k] - 1);
  }
  const i128 d = D.d;
  r.bezout = d * d == 3 * sq;
  r.genus_one = (d - 1) * (d - 2) - 3 * pairs == 2;
  r.degree_mod3 = D.d % 3 == 0;
  return r;
}

struct MultipleComponent {
  int multiplicity;     // alpha >= 2
  std::int64_t degree;
};

// Degree as a foliation of a pencil of curves of degree member_degree:
// 2 deg(C) - 2 - sum (alpha - 1) deg(component).
inline std::int64_t darboux_pencil_degree(std::int64_t member_degree,
                                          std::span<const MultipleComponent> components) {
  std::int64_t deg = 2 * member_degree - 2;
  for (const auto& c : components) {
    if (c.multiplicity < 2) throw std::domain_error("darboux_pencil_degree: multiplicity below 2");
    deg -= (c.multiplicity - 1) * c.degree;
  }
  return deg;
}

// Degree as a foliation from the singular scheme count deg^2 + deg + 1.
inline constexpr std::int64_t darboux_singularity_count(std::int64_t foliation_degree) {
  return foliation_degree * foliation_degree + foliation_degree + 1;
}

}  // namespace lnpencil
