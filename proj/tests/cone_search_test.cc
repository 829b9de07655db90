#include "lqnash/cone_search.h"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.h"

namespace lqnash {
namespace {

using testing::Rng;

// svec coordinates of a 2x2 symmetric matrix: [x11, sqrt2 x21, x22].
Vector svec2(double a, double b, double c) {
  Matrix m(2, 2);
  m << a, b, b, c;
  return svec(m);
}

TEST(AffineSet, SolveAndRestrict) {
  Rng rng(21);
  const Matrix e = rng.matrix(2, 5);
  const Vector f = rng.vector(2);
  const std::optional<AffineSet> set = AffineSet::solve(e, f);
  ASSERT_TRUE(set.has_value());
  EXPECT_EQ(set->dim(), 3);
  for (int k = 0; k < 5; ++k) {
    const Vector x = set->point() + set->basis() * rng.vector(3);
    EXPECT_LE((e * x - f).norm(), 1e-10);
  }
  // Projection is idempotent and lands in the set.
  const Vector z = rng.vector(5);
  const Vector p = set->project(z);
  EXPECT_LE((e * p - f).norm(), 1e-10);
  EXPECT_LE((set->project(p) - p).norm(), 1e-12);
  // Adding one more generic constraint removes one dimension.
  const std::optional<AffineSet> sub = set->restrict(rng.matrix(1, 5), rng.vector(1));
  ASSERT_TRUE(sub.has_value());
  EXPECT_EQ(sub->dim(), 2);
}

TEST(AffineSet, InconsistentSystemIsEmpty) {
  Matrix e(2, 2);
  e << 1.0, 1.0, 2.0, 2.0;
  EXPECT_FALSE(AffineSet::solve(e, Vector{{1.0, 3.0}}).has_value());
}

TEST(ConeSearch, FindsPsdPointOnSlice) {
  // {X : X11 = 0.3, trace X = 1} intersects the PSD cone.
  Matrix e = Matrix::Zero(2, 3);
  e(0, 0) = 1.0;
  e(1, 0) = 1.0;
  e(1, 2) = 1.0;
  const AffineSet set = *AffineSet::solve(e, Vector{{0.3, 1.0}});
  const PsdBlock blocks[] = {{0, 2, 0.0}};
  const ConeSearchResult r = find_cone_point(set, blocks);
  ASSERT_EQ(r.status, ConeSearchStatus::kFound);
  EXPECT_TRUE(is_psd(smat(r.point, 2), 1e-9));
  EXPECT_LE((e * r.point - Vector{{0.3, 1.0}}).norm(), 1e-9);
}

TEST(ConeSearch, TangentialIntersectionIsFound) {
  // Only X = diag(1, 0) satisfies X11 = 1, X22 = 0 within the cone: a
  // boundary point reached through a one-dimensional affine line.
  Matrix e = Matrix::Zero(2, 3);
  e(0, 0) = 1.0;
  e(1, 2) = 1.0;
  const AffineSet set = *AffineSet::solve(e, Vector{{1.0, 0.0}});
  const PsdBlock blocks[] = {{0, 2, 0.0}};
  const ConeSearchResult r = find_cone_point(set, blocks);
  ASSERT_EQ(r.status, ConeSearchStatus::kFound);
  EXPECT_LE((smat(r.point, 2) - Matrix(Vector{{1.0, 0.0}}.asDiagonal())).norm(), 1e-6);
}

TEST(ConeSearch, SinglePointOutsideCone) {
  const AffineSet set(svec2(1.0, 0.0, -1.0), Matrix(3, 0));
  const PsdBlock blocks[] = {{0, 2, 0.0}};
  EXPECT_EQ(find_cone_point(set, blocks).status, ConeSearchStatus::kPointOutsideCone);
}

TEST(ConeSearch, InteriorPointHasMargin) {
  const AffineSet set(Vector::Zero(3), Matrix::Identity(3, 3));
  Matrix e = Matrix::Zero(1, 3);
  e(0, 0) = 1.0;
  e(0, 2) = 1.0;
  const AffineSet slice = *set.restrict(e, Vector{{2.0}});
  const PsdBlock blocks[] = {{0, 2, 0.0}};
  const ConeSearchResult r = find_interior_cone_point(slice, blocks, {}, 1e-3);
  ASSERT_EQ(r.status, ConeSearchStatus::kFound);
  EXPECT_GT(symmetric_eigenvalues(smat(r.point, 2))(0), 0.0);
}

TEST(ConeSearch, BlocksFeasibleAndProjection) {
  const std::vector<PsdBlock> blocks = {{0, 1, 0.5}, {1, 2, 0.0}};
  Vector x(4);
  x << 0.2, svec2(1.0, 2.0, 1.0);  // 0.2 < floor, second block indefinite
  EXPECT_FALSE(blocks_feasible(x, blocks, 1e-9));
  const Vector p = project_onto_blocks(x, blocks);
  EXPECT_TRUE(blocks_feasible(p, blocks, 1e-9));
  EXPECT_NEAR(p(0), 0.5, 1e-14);
}

TEST(Dykstra, ProjectionSatisfiesVariationalInequality) {
  // Project onto {X PSD : X11 = 1} and check <z - x*, y - x*> <= 0 for
  // feasible y (first-order optimality of a convex projection).
  Rng rng(22);
  Matrix e = Matrix::Zero(1, 3);
  e(0, 0) = 1.0;
  const AffineSet set = *AffineSet::solve(e, Vector{{1.0}});
  const PsdBlock blocks[] = {{0, 2, 0.0}};
  ConeSearchOptions options;
  options.max_iterations = 20000;
  for (int trial = 0; trial < 5; ++trial) {
    const Vector z = 2.0 * rng.vector(3);
    const ConeSearchResult r = dykstra_project(z, set, blocks, options);
    ASSERT_EQ(r.status, ConeSearchStatus::kFound);
    for (int k = 0; k < 50; ++k) {
      const double b = rng.uniform(-1.0, 1.0);
      const double c = b * b + rng.uniform(0.0, 2.0);
      const Vector y = svec2(1.0, b, c);
      EXPECT_LE((z - r.point).dot(y - r.point), 1e-5);
    }
  }
}

TEST(Equilibration, RecoversSmallScaleDirections) {
  Matrix e(2, 2);
  e << 1.0, 0.0, 0.0, 1e-11;
  EXPECT_EQ(nullspace(e).cols(), 1);  // the tiny column looks null unscaled
  EXPECT_EQ(equilibrated_nullspace(e).cols(), 0);
  Matrix g(1, 2);
  g << 1.0, -1e6;
  const Matrix ns = equilibrated_nullspace(g);
  ASSERT_EQ(ns.cols(), 1);
  EXPECT_LE((g * ns).norm(), 1e-9 * g.norm());
  const std::optional<AffineSet> sol = equilibrated_solve(g, Vector{{2.0}});
  ASSERT_TRUE(sol.has_value());
  EXPECT_NEAR((g * sol->point())(0), 2.0, 1e-9);
}

TEST(DualCertificate, ProvesEmptyInteriorIntersection) {
  // L = span{diag(1, -1)} has no positive definite point; Y = I/2 is in the
  // orthogonal complement, PSD, and has unit trace.
  const Vector l = svec2(1.0, 0.0, -1.0).normalized();
  const PsdBlock blocks[] = {{0, 2, 0.0}};
  const std::optional<Vector> y = find_infeasibility_certificate(l, blocks, 0);
  ASSERT_TRUE(y.has_value());
  EXPECT_LE(std::abs(l.dot(*y)), 1e-9);
  const Matrix ym = smat(*y, 2);
  EXPECT_NEAR(ym.trace(), 1.0, 1e-9);
  EXPECT_TRUE(is_psd(ym, 1e-8));
}

TEST(DualCertificate, AbsentWhenInteriorPointExists) {
  // span{I, diag(1,-1)} contains the identity; no certificate can exist
  // because <Y, I> = trace Y = 1 != 0.
  Matrix l(3, 2);
  l.col(0) = svec2(1.0, 0.0, 1.0).normalized();
  l.col(1) = svec2(1.0, 0.0, -1.0).normalized();
  const PsdBlock blocks[] = {{0, 2, 0.0}};
  EXPECT_FALSE(find_infeasibility_certificate(l, blocks, 0).has_value());
}

TEST(DualCertificate, StrictBlockSelectsWhichConeMustBeInterior) {
  // Coordinates (q, t): L = span{(1, 0)}. A point with q >= 0 exists but
  // every point has t = 0, so "t > 0" is infeasible while "q > 0" is not.
  Matrix l(2, 1);
  l << 1.0, 0.0;
  const PsdBlock blocks[] = {{0, 1, 0.0}, {1, 1, 0.0}};
  const std::optional<Vector> y = find_infeasibility_certificate(l, blocks, 1);
  ASSERT_TRUE(y.has_value());
  EXPECT_NEAR((*y)(1), 1.0, 1e-9);
  EXPECT_FALSE(find_infeasibility_certificate(l, blocks, 0).has_value());
}

TEST(ClampPsd, NoOpInsideProjectionOutside) {
  const Matrix inside = Vector{{1.0, 2.0}}.asDiagonal();
  EXPECT_EQ(clamp_psd(inside), inside);
  const Matrix outside = Vector{{-1.0, 2.0}}.asDiagonal();
  EXPECT_NEAR(clamp_psd(outside)(0, 0), 0.0, 1e-14);
}

}  // namespace
}  // namespace lqnash
