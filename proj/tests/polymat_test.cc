#include "lqnash/polymat.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.h"

namespace lqnash {
namespace {

using testing::Rng;

const Poly kS = Poly::monomial(1.0, 1);

Poly random_poly(Rng& rng, int degree) {
  std::vector<double> c;
  for (int k = 0; k <= degree; ++k) c.push_back(rng.normal());
  return Poly(c);
}

PolyMatrix random_poly_matrix(Rng& rng, Index rows, Index cols, int degree) {
  PolyMatrix p(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) p(i, j) = random_poly(rng, degree);
  }
  return p;
}

TEST(Poly, ArithmeticCommutesWithEvaluation) {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Poly a = random_poly(rng, rng.integer(0, 4));
    const Poly b = random_poly(rng, rng.integer(0, 4));
    const Complex s(rng.normal(), rng.normal());
    EXPECT_LE(std::abs((a + b)(s) - (a(s) + b(s))), 1e-10);
    EXPECT_LE(std::abs((a - b)(s) - (a(s) - b(s))), 1e-10);
    EXPECT_LE(std::abs((a * b)(s) - a(s) * b(s)), 1e-9 * (1.0 + std::abs(a(s) * b(s))));
    EXPECT_LE(std::abs(a.reflect()(s) - a(-s)), 1e-10);
  }
}

TEST(Poly, ExactCancellationTrimsToZero) {
  const Poly a{1.0, 2.0, 3.0};
  EXPECT_TRUE((a - a).is_zero());
  EXPECT_EQ((a - a).degree(), kZeroDegree);
  const Poly b{1.0, 2.0, 3.0 + 1e-14};
  EXPECT_EQ((a - b).degree(), kZeroDegree);
}

TEST(Poly, DivisionIdentity) {
  Rng rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const Poly a = random_poly(rng, rng.integer(2, 6));
    const Poly b = random_poly(rng, rng.integer(1, 3));
    const PolyDivision d = divide(a, b);
    EXPECT_LT(d.remainder.degree(), b.degree());
    const Complex s(0.3, -0.7);
    EXPECT_LE(std::abs(d.quotient(s) * b(s) + d.remainder(s) - a(s)),
              1e-8 * (1.0 + std::abs(a(s))));
  }
}

TEST(Poly, GcdOfSharedRoot) {
  const double r1[] = {1.0, 2.0};
  const double r2[] = {1.0, -3.0};
  const Poly g = gcd(Poly::from_real_roots(r1), Poly::from_real_roots(r2));
  ASSERT_EQ(g.degree(), 1);
  EXPECT_NEAR(g.coeff(1), 1.0, 1e-12);
  EXPECT_NEAR(g.coeff(0), -1.0, 1e-9);
  const double r3[] = {5.0};
  EXPECT_EQ(gcd(Poly::from_real_roots(r1), Poly::from_real_roots(r3)).degree(), 0);
}

TEST(Poly, RootsOfKnownFactors) {
  const double r[] = {-2.0, 0.5, 3.0};
  const ComplexVector z = roots(Poly::from_real_roots(r));
  std::vector<double> got;
  for (Index k = 0; k < z.size(); ++k) got.push_back(z(k).real());
  std::sort(got.begin(), got.end());
  ASSERT_EQ(got.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(got[k], r[k], 1e-10);
}

TEST(PolyMatrix, ProductAndParaconjugateMatchPointwiseEvaluation) {
  Rng rng(33);
  const PolyMatrix a = random_poly_matrix(rng, 2, 3, 2);
  const PolyMatrix b = random_poly_matrix(rng, 3, 2, 1);
  const Complex s(0.4, 1.3);
  EXPECT_LE(((a * b).eval(s) - a.eval(s) * b.eval(s)).norm(), 1e-10);
  EXPECT_LE((a.paraconjugate().eval(s) - a.eval(-s).transpose()).norm(), 1e-12);
  const Matrix m = rng.matrix(2, 2);
  EXPECT_LE(((m * a).eval(s) - m.cast<Complex>() * a.eval(s)).norm(), 1e-10);
}

TEST(PolyMatrix, CoefficientsAndPencil) {
  Rng rng(34);
  const Matrix a = rng.matrix(3, 3);
  const PolyMatrix p = PolyMatrix::pencil(a);
  EXPECT_EQ(p.degree(), 1);
  EXPECT_LE((p.coefficient(0) + a).norm(), 1e-15);
  EXPECT_LE((p.coefficient(1) - Matrix::Identity(3, 3)).norm(), 1e-15);
  const Matrix c[] = {rng.matrix(2, 2), rng.matrix(2, 2), rng.matrix(2, 2)};
  const PolyMatrix q = PolyMatrix::from_coefficients(c);
  for (int k = 0; k < 3; ++k) EXPECT_LE((q.coefficient(k) - c[k]).norm(), 1e-15);
}

TEST(PolyMatrix, DeterminantMatchesPointwiseDeterminant) {
  Rng rng(35);
  for (Index n = 1; n <= 4; ++n) {
    const PolyMatrix p = random_poly_matrix(rng, n, n, 2);
    const Poly d = determinant(p);
    for (int k = 0; k < 3; ++k) {
      const Complex s(rng.normal(), rng.normal());
      const Complex direct = p.eval(s).determinant();
      EXPECT_LE(std::abs(d(s) - direct), 1e-8 * (1.0 + std::abs(direct)));
    }
  }
}

TEST(PolyMatrix, CharacteristicPolynomialOfPencil) {
  Matrix a(2, 2);
  a << 0.0, 1.0, -2.0, -3.0;  // eigenvalues -1, -2
  const Poly d = determinant(PolyMatrix::pencil(a));
  EXPECT_NEAR(d.coeff(0), 2.0, 1e-12);
  EXPECT_NEAR(d.coeff(1), 3.0, 1e-12);
  EXPECT_NEAR(d.coeff(2), 1.0, 1e-12);
}

TEST(PolyMatrix, ColumnDegreesAndReducedness) {
  // [[s, -1], [0, s^2 - 1]] has column degrees (1, 2) and leading
  // coefficient matrix [[1, 0], [0, 1]].
  const PolyMatrix d{{kS, Poly{-1.0}}, {Poly(), Poly{-1.0, 0.0, 1.0}}};
  EXPECT_EQ(column_degrees(d), (std::vector<int>{1, 2}));
  EXPECT_TRUE(is_column_reduced(d));
  // [[s, s^2], [1, s]] has leading coefficients [[1, 1], [0, 0]].
  const PolyMatrix e{{kS, kS * kS}, {Poly{1.0}, kS}};
  EXPECT_FALSE(is_column_reduced(e));
}

TEST(PolyRank, RankDeficientFamilies) {
  Rng rng(36);
  for (int trial = 0; trial < 10; ++trial) {
    // Outer product u(s) v(s)' has normal rank 1.
    const PolyMatrix u = random_poly_matrix(rng, 3, 1, 2);
    const PolyMatrix v = random_poly_matrix(rng, 1, 3, 1);
    const PolyMatrix p = u * v;
    EXPECT_EQ(poly_rank(p), 1);
    EXPECT_EQ(poly_rank_by_minors(p), 1);
  }
  const PolyMatrix full = random_poly_matrix(rng, 3, 3, 1);
  EXPECT_EQ(poly_rank(full), 3);
  EXPECT_EQ(poly_rank(PolyMatrix(2, 2)), 0);
}

TEST(Compression, UnimodularTransformExposesRank) {
  // The return-difference matrix of the two-state example: [[1, -s], [s, -s^2]].
  const PolyMatrix phi{{Poly{1.0}, -kS}, {kS, -1.0 * (kS * kS)}};
  const ColumnCompression c = compress_columns(phi);
  ASSERT_EQ(c.rank, 1);
  const PolyMatrix pl = phi * c.transform;
  // Trailing column vanishes identically, leading block matches.
  EXPECT_TRUE(pl.middle_cols(1, 1).is_zero());
  EXPECT_LE(coeff_distance(pl.middle_cols(0, 1), c.compressed), 1e-10);
  // Unimodular: constant nonzero determinant.
  const Poly det = determinant(c.transform);
  EXPECT_EQ(det.degree(), 0);
  EXPECT_GT(std::abs(det.coeff(0)), 1e-12);
}

TEST(Compression, RandomRankDeficientInputs) {
  Rng rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const PolyMatrix u = random_poly_matrix(rng, 3, 2, 1);
    const PolyMatrix v = random_poly_matrix(rng, 2, 3, 1);
    const PolyMatrix p = u * v;
    const ColumnCompression c = compress_columns(p);
    ASSERT_EQ(c.rank, 2);
    const PolyMatrix pl = p * c.transform;
    const double scale = std::max(1.0, p.coeff_norm());
    EXPECT_LE(pl.middle_cols(2, 1).coeff_norm(), 1e-7 * scale * (1.0 + c.transform.coeff_norm()));
    const Poly det = determinant(c.transform);
    EXPECT_EQ(det.degree(), 0);
    EXPECT_EQ(poly_rank(c.compressed), 2);
  }
}

TEST(Compression, FullRankReturnsIdentity) {
  const PolyMatrix p{{kS, Poly{1.0}}, {Poly{0.0}, kS}};
  const ColumnCompression c = compress_columns(p);
  EXPECT_EQ(c.rank, 2);
  EXPECT_LE(coeff_distance(c.transform, PolyMatrix::identity(2)), 1e-15);
}

TEST(RhpRoots, ScalarClassification) {
  // (s - 1)(s + 2)(s^2 + 1): roots 1 and +-j count, -2 does not.
  const double r[] = {1.0, -2.0};
  const Poly p = Poly::from_real_roots(r) * Poly{1.0, 0.0, 1.0};
  const RhpRootSearch search = rhp_roots(p);
  EXPECT_FALSE(search.degenerate);
  ASSERT_EQ(search.roots.size(), 3u);
  int boundary = 0;
  for (const RhpRoot& root : search.roots) {
    EXPECT_GE(root.location.real(), -1e-7);
    if (root.boundary) ++boundary;
  }
  EXPECT_EQ(boundary, 2);
}

TEST(RhpRoots, RepeatedRootMultiplicity) {
  const double r[] = {2.0, 2.0, -1.0};
  const RhpRootSearch search = rhp_roots(Poly::from_real_roots(r));
  ASSERT_EQ(search.roots.size(), 1u);
  EXPECT_NEAR(search.roots[0].location.real(), 2.0, 1e-6);
  EXPECT_EQ(search.roots[0].multiplicity, 2);
}

TEST(RhpRoots, TallMatrixCommonZeros) {
  // [s^2 - 1; s^2 - 1]: common zeros +-1; only s = 1 is in the closed RHP.
  const Poly q{-1.0, 0.0, 1.0};
  PolyMatrix t(2, 1);
  t(0, 0) = q;
  t(1, 0) = q;
  const RhpRootSearch search = rhp_roots(t);
  ASSERT_EQ(search.roots.size(), 1u);
  EXPECT_NEAR(search.roots[0].location.real(), 1.0, 1e-9);
  EXPECT_NEAR(search.roots[0].location.imag(), 0.0, 1e-9);
  // No common zero: [s - 1; s + 1].
  PolyMatrix u(2, 1);
  u(0, 0) = Poly{-1.0, 1.0};
  u(1, 0) = Poly{1.0, 1.0};
  EXPECT_TRUE(rhp_roots(u).roots.empty());
  EXPECT_TRUE(rhp_roots(PolyMatrix(2, 1)).degenerate);
}

}  // namespace
}  // namespace lqnash
