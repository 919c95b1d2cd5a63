#include <gtest/gtest.h>

#include "shorted/corpus.hpp"

namespace {

using namespace shorted;

Mat m22(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

Mat col2(double a, double b) {
  Mat m(2, 1);
  m << a, b;
  return m;
}

TEST(FromSpanning, CollinearColumns) {
  Mat v(3, 2);
  v << 1, 2, 0, 0, 0, 0;
  Subspace s = from_spanning(v);
  EXPECT_EQ(s.dim(), 1);
  EXPECT_TRUE(subspace_equal(s, Subspace::coords(3, std::vector<int>{0})).ok);
}

TEST(FromSpanning, EmptyColumnSet) {
  Subspace s = from_spanning(Mat(3, 0));
  EXPECT_EQ(s.dim(), 0);
  EXPECT_EQ(s.ambient, 3);
}

TEST(FromSpanning, NearDependentCollapses) {
  Mat v(2, 2);
  v << 1, 2, 2, 4.0000000001;
  EXPECT_EQ(from_spanning(v).dim(), 1);
}

TEST(Complement, Examples) {
  Subspace e1 = Subspace::coords(2, std::vector<int>{0});
  EXPECT_TRUE(
      subspace_equal(complement(e1), Subspace::coords(2, std::vector<int>{1}))
          .ok);
  EXPECT_EQ(complement(Subspace::full(4)).dim(), 0);
  EXPECT_EQ(complement(Subspace::zero(4)).dim(), 4);

  Subspace diag = from_spanning(col2(1.0 / std::sqrt(5), 2.0 / std::sqrt(5)));
  Subspace anti = from_spanning(col2(2.0 / std::sqrt(5), -1.0 / std::sqrt(5)));
  EXPECT_TRUE(subspace_equal(complement(diag), anti).ok);
}

TEST(Complement, Involution) {
  std::mt19937_64 eng(3);
  for (int it = 0; it < 50; ++it) {
    const int n = 2 + int(eng() % 10);
    const int k = int(eng() % (n + 1));
    Subspace s{n, rnd::random_unitary(n, eng).leftCols(k)};
    EXPECT_TRUE(subspace_equal(complement(complement(s)), s).ok);
    EXPECT_EQ(complement(s).dim(), n - k);
  }
}

TEST(Includes, Examples) {
  Subspace e1 = Subspace::coords(3, std::vector<int>{0});
  Subspace e12 = Subspace::coords(3, std::vector<int>{0, 1});
  Subspace e3 = Subspace::coords(3, std::vector<int>{2});
  InclusionCheck in = includes(e12, e1);
  EXPECT_TRUE(in.ok);
  EXPECT_NEAR(in.defect, 0.0, 1e-14);
  in = includes(e12, e3);
  EXPECT_FALSE(in.ok);
  EXPECT_NEAR(in.defect, 1.0, 1e-12);

  Subspace half = from_spanning(col2(1, 1));
  in = includes(Subspace::coords(2, std::vector<int>{0}), half);
  EXPECT_FALSE(in.ok);
  EXPECT_NEAR(in.defect, 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(Includes, AmbientMismatchRejected) {
  EXPECT_THROW(includes(Subspace::full(2), Subspace::full(3)), InvalidInput);
  EXPECT_THROW(sum(Subspace::full(2), Subspace::full(3)), InvalidInput);
  EXPECT_THROW(intersect(Subspace::full(2), Subspace::full(3)), InvalidInput);
}

TEST(Intersect, Examples) {
  Subspace e12 = Subspace::coords(3, std::vector<int>{0, 1});
  Subspace e23 = Subspace::coords(3, std::vector<int>{1, 2});
  EXPECT_TRUE(subspace_equal(intersect(e12, e23),
                             Subspace::coords(3, std::vector<int>{1}))
                  .ok);
  EXPECT_TRUE(subspace_equal(intersect(e12, e12), e12).ok);

  Mat v(3, 1);
  v << 1, 1, 0;
  Subspace diag = from_spanning(v);
  EXPECT_TRUE(subspace_equal(intersect(diag, e12), diag).ok);
}

TEST(Sum, Examples) {
  Subspace e1 = Subspace::coords(2, std::vector<int>{0});
  Subspace e2 = Subspace::coords(2, std::vector<int>{1});
  EXPECT_EQ(sum(e1, e2).dim(), 2);
  EXPECT_TRUE(subspace_equal(sum(e1, Subspace::zero(2)), e1).ok);
  Subspace plus = from_spanning(col2(1, 1)), minus = from_spanning(col2(1, -1));
  EXPECT_EQ(sum(plus, minus).dim(), 2);
}

TEST(SumIntersect, DimensionFormulaRandom) {
  std::mt19937_64 eng(7);
  for (int it = 0; it < 500; ++it) {
    const int n = 3 + int(eng() % 10);
    Mat u = rnd::random_unitary(n, eng);
    // engineered overlap: s1 and s2 share the first `shared` columns of u
    const int shared = int(eng() % (n / 2 + 1));
    const int extra1 = int(eng() % (n - shared + 1));
    const int extra2 = int(eng() % (n - shared - extra1 + 1));
    Mat b1(n, shared + extra1), b2(n, shared + extra2);
    b1 << u.leftCols(shared), u.middleCols(shared, extra1);
    b2 << u.leftCols(shared), u.middleCols(shared + extra1, extra2);
    Subspace s1{n, b1}, s2{n, b2};
    Subspace us = sum(s1, s2);
    Subspace is = intersect(s1, s2);
    EXPECT_EQ(us.dim() + is.dim(), s1.dim() + s2.dim());
    EXPECT_EQ(is.dim(), shared);
    EXPECT_LE(includes(us, s1).defect, 1e-10);
    EXPECT_LE(includes(s1, is).defect, 1e-10);
  }
}

TEST(Projector, Examples) {
  Subspace e1 = Subspace::coords(2, std::vector<int>{0});
  EXPECT_LE(operator_norm(projector(e1) - m22(1, 0, 0, 0)), 1e-14);
  EXPECT_LE(operator_norm(projector(Subspace::full(3)) - Mat::Identity(3, 3)),
            1e-14);
  Subspace half = from_spanning(col2(1, 1));
  EXPECT_LE(operator_norm(projector(half) - m22(0.5, 0.5, 0.5, 0.5)), 1e-14);
}

TEST(Projector, ComplementIdentity) {
  std::mt19937_64 eng(13);
  for (int it = 0; it < 50; ++it) {
    const int n = 2 + int(eng() % 10);
    Subspace s{n, rnd::random_unitary(n, eng).leftCols(int(eng() % (n + 1)))};
    Mat p = projector(s), q = projector(complement(s));
    EXPECT_LE(operator_norm(p + q - Mat::Identity(n, n)), 1e-11);
    EXPECT_LE(operator_norm(p * p - p), 1e-12);
    EXPECT_LE(operator_norm(Mat(p.adjoint()) - p), 1e-12);
  }
}

TEST(RangeNull, Examples) {
  Mat t = m22(1, 2, 3, 6);
  Subspace r = range_of(t);
  EXPECT_EQ(r.dim(), 1);
  Mat dir(2, 1);
  dir << 1.0 / std::sqrt(10.0), 3.0 / std::sqrt(10.0);
  EXPECT_TRUE(subspace_equal(r, from_spanning(dir)).ok);

  EXPECT_EQ(null_of(Mat::Identity(3, 3)).dim(), 0);
  Subspace n = null_of(m22(0, 1, 0, 0));
  EXPECT_TRUE(subspace_equal(n, Subspace::coords(2, std::vector<int>{0})).ok);
}

TEST(RangeNull, RankNullity) {
  std::mt19937_64 eng(17);
  for (int it = 0; it < 100; ++it) {
    const int r = 1 + int(eng() % 12), c = 1 + int(eng() % 12);
    Mat m = rnd::rank_matrix(r, c, int(eng() % (std::min(r, c) + 1)), eng);
    EXPECT_EQ(range_of(m).dim() + null_of(m).dim(), c);
    // T annihilates its nullspace
    Subspace n = null_of(m);
    if (n.dim() > 0) EXPECT_LE(operator_norm(m * n.basis), 1e-10 * (1 + operator_norm(m)));
  }
}

TEST(Preimage, Examples) {
  Subspace e2 = Subspace::coords(2, std::vector<int>{1});
  Subspace pre = preimage(m22(1, 2, 3, 6), e2);
  EXPECT_TRUE(subspace_equal(pre, from_spanning(col2(2, -1))).ok);

  Subspace s = from_spanning(col2(1, 1));
  EXPECT_TRUE(subspace_equal(preimage(Mat::Identity(2, 2), s), s).ok);
  EXPECT_EQ(preimage(Mat::Zero(2, 2), s).dim(), 2);
}

TEST(Preimage, FullAndZeroTargets) {
  std::mt19937_64 eng(29);
  for (int it = 0; it < 50; ++it) {
    const int r = 1 + int(eng() % 8), c = 1 + int(eng() % 8);
    Mat t = rnd::rank_matrix(r, c, int(eng() % (std::min(r, c) + 1)), eng);
    EXPECT_EQ(preimage(t, Subspace::full(r)).dim(), c);
    EXPECT_TRUE(
        subspace_equal(preimage(t, Subspace::zero(r)), null_of(t)).ok);
    // membership: T maps the preimage into the target
    Subspace s{r, rnd::random_unitary(r, eng).leftCols(1 + int(eng() % r))};
    Subspace pre = preimage(t, s);
    if (pre.dim() > 0) {
      Mat image = t * pre.basis;
      Mat outside = image - projector(s) * image;
      EXPECT_LE(operator_norm(outside), 1e-10 * (1 + operator_norm(t)));
    }
  }
}

TEST(Preimage, DimensionMismatchRejected) {
  EXPECT_THROW(preimage(Mat::Zero(2, 3), Subspace::full(3)), InvalidInput);
}

}  // namespace
