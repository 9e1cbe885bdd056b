// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "lnpencil/cli.hpp"
#include "lnpencil/lnpencil.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace lnpencil;

namespace {

using Clock = std::chrono::steady_clock;
using Data = std::array<std::int64_t, 5>;

struct Outcome {
  bool ok;
  std::string detail;
};

Data data_of(std::int64_t m, std::int64_t n) { return data_for(EisensteinParam(m, n)).data.as_array(); }

std::array<std::int64_t, 3> sorted_finite(const PencilData& d) {
  std::array<std::int64_t, 3> a{d.m1, d.mtau, d.mtau2};
  std::sort(a.begin(), a.end());
  return a;
}

HomPoly X() { return HomPoly::var(Var::X); }
HomPoly Y() { return HomPoly::var(Var::Y); }
HomPoly Z() { return HomPoly::var(Var::Z); }
HomPoly cst(const QTauScalar& s) { return HomPoly::constant(s); }
HomPoly mono(std::uint32_t i, std::uint32_t j, std::uint32_t k, const QTauScalar& s) {
  return HomPoly::monomial({i, j, k}, s);
}

struct Pair {
  std::int64_t m, n;
  HomPoly num, den;
};

std::vector<Pair> first_integrals() {
  const QTauScalar t = QTauScalar::tau(), t2 = QTauScalar::tau2(), one(1);
  const HomPoly x = X(), y = Y(), z = Z(), x3 = pow(x, 3), y3 = pow(y, 3), z3 = pow(z, 3);
  std::vector<Pair> v;
  v.push_back({1, 0, (y - x) * (z - x) * (y - z), (y - cst(t) * x) * (z - cst(t2) * x) * (z - cst(t) * y)});
  // first factor y - tau x (l2): with y - tau^2 x the numerator misses a base point
  v.push_back({0, 1, (y - cst(t) * x) * (z - x) * (z - cst(t2) * y), (y - x) * (z - cst(t) * x) * (z - cst(t) * y)});
  v.push_back(
      {-1, -1, (y - x) * (z - cst(t2) * x) * (z - cst(t2) * y), (y - cst(t) * x) * (z - cst(t) * x) * (z - y)});
  v.push_back({0, 0, y3 * (x3 - z3), x3 * (y3 - z3)});
  v.push_back({-1, 0, (y3 - z3) * pow(x * x - y * z, 3), (x3 - z3) * pow(z * x - y * y, 3)});
  v.push_back({0, -1, (y3 - z3) * pow(x * x - cst(t2) * y * z, 3), (x3 - z3) * pow(cst(t) * y * y - x * z, 3)});
  v.push_back({1, 1, (y3 - z3) * pow(x * x - cst(t) * y * z, 3), (x3 - z3) * pow(y * y - cst(t) * x * z, 3)});
  const HomPoly a1 = mono(3, 1, 0, one) + mono(0, 4, 0, t2) + mono(1, 2, 1, one - t) + mono(2, 0, 2, one - t) +
                     mono(0, 1, 3, one);
  const HomPoly b1 = mono(4, 0, 0, one) + mono(1, 3, 0, t) + mono(2, 1, 1, QTauScalar(2) * t + one) +
                     mono(0, 2, 2, QTauScalar(2) * t + one) + mono(1, 0, 3, t);
  v.push_back({1, -1, (x3 - z3) * pow(a1, 3), (y3 - z3) * pow(b1, 3)});
  const HomPoly a2 = mono(3, 1, 0, one) + mono(0, 4, 0, t) + mono(1, 2, 1, QTauScalar(-2) * t - one) +
                     mono(2, 0, 2, t - one) + mono(0, 1, 3, one);
  const HomPoly b2 = mono(4, 0, 0, one) + mono(1, 3, 0, -t - one) + mono(2, 1, 1, t - one) +
                     mono(0, 2, 2, t + QTauScalar(2)) + mono(1, 0, 3, -t - one);
  v.push_back({-1, 1, (x3 - z3) * pow(a2, 3), (y3 - z3) * pow(b2, 3)});
  return v;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  std::vector<std::string> bad;
  auto expect = [&](bool c, const std::string& what) {
    if (!c) bad.push_back(what);
  };
  DataResult a = data_for(EisensteinParam(-2, 41));
  expect(a.plan.steps.size() == 57 && a.data.as_array() == Data{5307, 1813, 1684, 1807, 3}, "-2+41t");
  DataResult b = data_for(EisensteinParam(-40, 160));
  expect(b.plan.steps.size() == 241 && b.data.d == 100806 && b.data.minf == 3 &&
             sorted_finite(b.data) == std::array<std::int64_t, 3>{33241, 33721, 33841},
         "-40+160t");
  DataResult c = data_for(EisensteinParam(180, -110));
  expect(c.plan.steps.size() == 312 && c.data.d == 64302 &&
             sorted_finite(c.data) == std::array<std::int64_t, 3>{21277, 21457, 21567},
         "180-110t");
  const std::vector<std::pair<std::pair<int, int>, Data>> nine = {
      {{1, 0}, {3, 0, 1, 1, 1}},  {{0, 1}, {3, 1, 0, 1, 1}},  {{-1, -1}, {3, 1, 1, 0, 1}},
      {{0, 0}, {6, 1, 1, 1, 3}},  {{-1, 0}, {9, 4, 1, 1, 3}}, {{0, -1}, {9, 1, 4, 1, 3}},
      {{1, 1}, {9, 1, 1, 4, 3}},  {{1, -1}, {15, 1, 7, 4, 3}}, {{-1, 1}, {15, 7, 1, 4, 3}}};
  for (const auto& [mn, d] : nine) {
    expect(data_of(mn.first, mn.second) == d, std::to_string(mn.first) + "," + std::to_string(mn.second));
  }
  std::string detail = "3 large parameters + 9 small pencils";
  if (!bad.empty()) detail = "mismatch at " + bad.front();
  return {bad.empty(), detail};
}

Outcome criterion2() {
  std::ostringstream out, err;
  const char* argv[] = {"lnpencil", "data", "-m", "-2", "-n", "8", "--trace"};
  const int code = cli::run(7, argv, out, err);
  const std::string expected =
      "[6, 1, 1, 1, 3]\n[9, 1, 4, 1, 3]\n[15, 7, 1, 4, 3]\n[27, 4, 13, 7, 3]\n[42, 19, 7, 13, 3]\n"
      "[63, 13, 28, 19, 3]\n[87, 37, 19, 28, 3]\n[117, 28, 49, 37, 3]\n[150, 61, 37, 49, 3]\n"
      "[189, 49, 76, 61, 3]\n[195, 76, 49, 67, 3]\n[243, 67, 97, 76, 3]\n[258, 97, 67, 91, 3]\n";
  const bool ok = code == 0 && out.str() == expected;
  return {ok, ok ? "13 lines, last [258, 97, 67, 91, 3]" : "trace differs"};
}

Outcome criterion3() {
  std::vector<std::string> bad;
  const HomPoly x3 = pow(X(), 3), y3 = pow(Y(), 3), z3 = pow(Z(), 3);
  PencilGenerators sextic = realize(EisensteinParam(0, 0)).generators;
  if (!(sextic.contains(z3 * (x3 - y3)) && sextic.contains(x3 * (z3 - y3)))) bad.push_back("sextic");
  PencilGenerators nonic = realize(EisensteinParam(-1, 0)).generators;
  if (!nonic.contains((y3 - z3) * pow(X() * X() - Y() * Z(), 3))) bad.push_back("nonic");
  for (const auto& p : first_integrals()) {
    PencilGenerators g = realize(EisensteinParam(p.m, p.n)).generators;
    if (!(g.contains(p.num) && g.contains(p.den))) {
      bad.push_back(EisensteinParam(p.m, p.n).to_string());
    }
  }
  const QTauScalar t = QTauScalar::tau(), one(1);
  const HomPoly f5 = mono(4, 1, 0, one) + mono(1, 4, 0, one) + mono(2, 2, 1, QTauScalar(3) * t) +
                     mono(3, 0, 2, QTauScalar(-2) * t - QTauScalar(2)) +
                     mono(0, 3, 2, QTauScalar(-2) * t - QTauScalar(2)) + mono(1, 1, 3, one) + mono(0, 0, 5, t + one);
  PencilGenerators deg18 = realize(EisensteinParam(-2, -2)).generators;
  if (!(deg18.degree() == 18 && deg18.contains((x3 - y3) * pow(f5, 3)))) bad.push_back("-2-2t");
  return {bad.empty(), bad.empty() ? "sextic, nonic, 9 first integrals, degree 18" : "not in span: " + bad.front()};
}

Outcome criterion4() {
  int count = 0;
  std::vector<std::string> bad;
  std::vector<std::pair<int, int>> params = {{1, 0}, {0, 1}, {-1, -1}, {0, 0}, {-1, 0},
                                             {0, -1}, {1, 1}, {1, -1}, {-1, 1}};
  for (int m = -10; m <= 10; ++m) {
    for (int n = -10; n <= 10; ++n) {
      if (data_for(EisensteinParam(m, n)).data.d <= 30) params.push_back({m, n});
    }
  }
  for (const auto& [m, n] : params) {
    const EisensteinParam t(m, n);
    if (!verify_lins_neto(realize(t).generators, t.to_rational())) bad.push_back(t.to_string());
    ++count;
  }
  return {bad.empty(), std::to_string(count) + " realizations (nine fundamental + all d <= 30 with |m|,|n| <= 10)" +
                           (bad.empty() ? "" : ", failing " + bad.front())};
}

Outcome criterion5() {
  std::size_t n_ok = 0, total = 0;
  for (std::int64_t m = -25; m <= 25; ++m) {
    for (std::int64_t n = -25; n <= 25; ++n) {
      const EisensteinParam t(m, n);
      DataResult r = data_for(t);
      bool ok = check_data_invariants(r.data).passed() && replay_plan(r.plan) == t.to_rational();
      for (CremonaStep s : kAllSteps) ok = ok && apply_q(s, apply_q(s, t.to_rational())) == t.to_rational();
      n_ok += ok;
      ++total;
    }
  }
  return {n_ok == total, std::to_string(n_ok) + "/" + std::to_string(total) + " parameters"};
}

Outcome criterion6() {
  const HomPoly L9 = arrangement_equation();
  const QTauScalar t = QTauScalar::tau(), t2 = QTauScalar::tau2();
  // cofactors written out independently of QuadMap::triangle
  const std::array<HomPoly, 4> cof = {
      pow(X() * Y() * Z(), 3),
      pow(HomPoly::linear(1, 1, 1) * HomPoly::linear(1, t, t2) * HomPoly::linear(1, t2, t), 3),
      pow(HomPoly::linear(1, t, t) * HomPoly::linear(1, 1, t2) * HomPoly::linear(1, t2, 1), 3),
      pow(HomPoly::linear(1, t, 1) * HomPoly::linear(1, t2, t2) * HomPoly::linear(1, 1, t), 3)};
  int ok = 0;
  for (CremonaStep s : kAllSteps) {
    const HomPoly lhs = pullback(L9, quad_map(s).components);
    auto c = proportionality(lhs, cof[step_code(s)] * L9);
    ok += verify_arrangement_invariance(s) && c && !c->is_zero();
  }
  return {ok == 4, std::to_string(ok) + "/4 maps"};
}

Outcome criterion7() {
  int count = 0;
  std::vector<std::string> bad;
  for (int m = -10; m <= 10; ++m) {
    for (int n = -10; n <= 10; ++n) {
      const EisensteinParam t(m, n);
      if (data_for(t).data.d > 60) continue;
      RealizeOptions opt;
      opt.multiplicities = true;
      opt.special = true;
      RealizationResult r = realize(t, opt);
      if (!r.verification.passed()) bad.push_back(t.to_string());
      ++count;
    }
  }
  return {bad.empty(), std::to_string(count) + " realizations with d <= 60" +
                           (bad.empty() ? "" : ", failing " + bad.front())};
}

// Degrees 5307 and 100806 are out of reach symbolically; what is checked
// is that the data level covers them and that realization asserts the
// degree of every step against the data prediction.
Outcome criterion8() {
  bool ok = data_for(EisensteinParam(-2, 41)).data.d == 5307 && data_for(EisensteinParam(-40, 160)).data.d == 100806;
  try {
    realize(EisensteinParam(-2, 41));
    ok = false;
  } catch (const DegreeCapExceeded& e) {
    ok = ok && e.predicted_degree() == 5307;
  }
  // the per-step assertion fires when the data disagrees with the polynomials
  RealizationResult r = realize(EisensteinParam(-2, 4));
  ok = ok && r.verification.stripped.size() == r.plan.steps.size() && r.generators.degree() == r.data.d &&
       r.data.d == 90;
  return {ok, "excluded (degrees 5307, 100806): data-level only, per-step degree assertion exercised on 8 steps to d = 90"};
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<Outcome()> run;
    double limit_s;  // 0: no time limit
  };
  const std::vector<Criterion> criteria = {
      {"1 data regression", criterion1, 1.0},
      {"2 trace regression", criterion2, 0},
      {"3 symbolic realization", criterion3, 30.0},
      {"4 foliation identity", criterion4, 300.0},
      {"5 invariant sweep", criterion5, 10.0},
      {"6 arrangement invariance", criterion6, 0},
      {"7 multiplicities and special members", criterion7, 0},
      {"8 large degrees (excluded)", criterion8, 0}};
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (o.ok && c.limit_s > 0 && secs > c.limit_s) {
      o = {false, o.detail + ", over the " + std::to_string(static_cast<int>(c.limit_s)) + " s budget"};
    }
    std::printf("%s  criterion %s: %s (%.2f s)\n", o.ok ? "PASS" : "FAIL", c.name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.ok;
  }
  return failures ? 1 : 0;
}
