#include "support.hpp"

#include <gtest/gtest.h>

using namespace testsupport;

TEST(QTau, TauIsPrimitiveCubeRoot) {
  const QTauScalar t = tau();
  EXPECT_TRUE((t * t + t + QTauScalar(1)).is_zero());
  EXPECT_TRUE((t * t * t).is_one());
  EXPECT_EQ(t * t, tau2());
  EXPECT_EQ(t.conj(), tau2());
}

TEST(QTau, RingAxiomsOnRandomTriples) {
  Gen g(11);
  for (int k = 0; k < 300; ++k) {
    QTauScalar a = g.scalar(), b = g.scalar(), c = g.scalar();
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) - b, a);
  }
}

TEST(QTau, InverseNormAndTrace) {
  Gen g(12);
  for (int k = 0; k < 300; ++k) {
    QTauScalar a = g.nonzero_scalar(), b = g.nonzero_scalar();
    EXPECT_TRUE((a * a.inverse()).is_one());
    EXPECT_EQ(a / b * b, a);
    EXPECT_EQ((a * b).norm(), a.norm() * b.norm());
    QTauScalar n = a * a.conj();
    EXPECT_TRUE(n.is_rational());
    EXPECT_EQ(n.a(), a.norm());
    EXPECT_EQ(QTauScalar(a.trace(), 0), a + a.conj());
  }
  EXPECT_THROW(QTauScalar().inverse(), std::domain_error);
}

TEST(QTau, AddProductMatchesExpression) {
  Gen g(13);
  for (int k = 0; k < 200; ++k) {
    QTauScalar acc = g.scalar(), x = g.scalar(), y = g.scalar();
    QTauScalar expect = acc + x * y;
    acc.add_product(x, y);
    EXPECT_EQ(acc, expect);
  }
}

TEST(QTau, TextRendering) {
  EXPECT_EQ(QTauScalar(-2, 8).to_string(), "-2+8*t");
  EXPECT_EQ(QTauScalar(0, 1).to_string(), "t");
  EXPECT_EQ(QTauScalar(0, -1).to_string(), "-t");
  EXPECT_EQ(QTauScalar(3, -1).to_string(), "3-t");
  EXPECT_EQ(QTauScalar(mpq_class(1, 2), mpq_class(-3, 4)).to_string("a"), "1/2-3/4*a");
  EXPECT_EQ(QTauScalar().to_string(), "0");
}

TEST(QTau, SixUnitsActFreely) {
  const auto& u = units();
  ASSERT_EQ(u.size(), 6u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    EXPECT_EQ(u[i].norm(), 1);
    for (std::size_t j = i + 1; j < u.size(); ++j) EXPECT_NE(u[i], u[j]);
  }
  Gen g(14);
  for (int k = 0; k < 200; ++k) {
    QTauScalar s = g.nonzero_scalar();
    int canonical = 0;
    for (const auto& v : u) {
      QTauScalar w = s * v;
      if (is_canonical_unit_rep(w)) ++canonical;
    }
    EXPECT_EQ(canonical, 1) << s;
    QTauScalar rep = s * canonical_unit_factor(s);
    EXPECT_TRUE(is_canonical_unit_rep(rep));
    EXPECT_TRUE(canonical_unit_factor(rep).is_one());  // idempotent
  }
}

TEST(QTau, CubeRootOfCubes) {
  Gen g(15);
  for (int k = 0; k < 200; ++k) {
    QTauScalar s = g.nonzero_scalar(30);
    QTauScalar c = s * s * s;
    auto r = cube_root(c);
    ASSERT_TRUE(r.has_value()) << c;
    EXPECT_EQ(*r * *r * *r, c);
    EXPECT_GT(r->a(), 0);
    EXPECT_GE(r->b(), 0);
  }
}

TEST(QTau, CubeRootRejectsNonCubes) {
  EXPECT_FALSE(cube_root(QTauScalar(2)).has_value());
  EXPECT_FALSE(cube_root(tau()).has_value());
  EXPECT_FALSE(cube_root(QTauScalar(mpq_class(1, 4))).has_value());
  EXPECT_FALSE(cube_root(QTauScalar(1, 1)).has_value());
  // -8 = (2 + 2 tau)^3 and the cone picks that root
  EXPECT_EQ(cube_root(QTauScalar(-8)), QTauScalar(2, 2));
  EXPECT_EQ(cube_root(QTauScalar()), QTauScalar());
}

TEST(QTau, EisensteinGcdDividesBoth) {
  Gen g(16);
  using detail::EisInt;
  for (int k = 0; k < 200; ++k) {
    EisInt c{g.integer(-20, 20), g.integer(-20, 20)};
    EisInt x = detail::eis_mul(c, EisInt{g.integer(-20, 20), g.integer(-20, 20)});
    EisInt y = detail::eis_mul(c, EisInt{g.integer(-20, 20), g.integer(-20, 20)});
    if (x.is_zero() && y.is_zero()) continue;
    EisInt d = detail::eis_gcd(x, y);
    ASSERT_FALSE(d.is_zero());
    for (const EisInt& e : {x, y}) {
      QTauScalar q = e.to_scalar() / d.to_scalar();
      EXPECT_TRUE(q.is_integral());
    }
    if (!c.is_zero()) {
      EXPECT_TRUE((d.to_scalar() / c.to_scalar()).is_integral());
    }
  }
}
