#include <gtest/gtest.h>

#include <quadlag/exact/cone.hpp>
#include <quadlag/exact/normal_form.hpp>

#include <random>

#include "support.hpp"

using namespace quadlag;
using qtest::imat;
using qtest::rmat;
using qtest::rvec;

namespace {

IntMatrix random_int_matrix(std::mt19937_64 &rng, std::size_t r, std::size_t c, long bound) {
  std::uniform_int_distribution<long> d(-bound, bound);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

bool is_unimodular(const IntMatrix &u) { return abs(determinant(u)) == 1; }

void expect_hnf_shape(const HermiteForm &h) {
  for (std::size_t i = 0; i < h.rank; ++i) {
    const std::size_t p = h.pivots[i];
    EXPECT_GT(h.basis(i, p), 0);
    for (std::size_t j = 0; j < p; ++j) EXPECT_EQ(h.basis(i, j), 0);
    for (std::size_t k = 0; k < i; ++k) {
      EXPECT_GE(h.basis(k, p), 0);
      EXPECT_LT(h.basis(k, p), h.basis(i, p));
    }
    if (i > 0) {
      EXPECT_GT(p, h.pivots[i - 1]);
    }
  }
}

} // namespace

TEST(RankAndNullspaces, SingleRow) {
  auto r = rank_and_nullspaces(rmat({{1, 1, 1}}));
  EXPECT_EQ(r.rank, 1u);
  EXPECT_EQ(r.right_nullspace_basis.cols(), 2u);
  EXPECT_TRUE((rmat({{1, 1, 1}}) * r.right_nullspace_basis).is_zero());
}

TEST(RankAndNullspaces, PentagonNormals) {
  RationalMatrix a = rmat({{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {-1, -1}});
  auto r = rank_and_nullspaces(a);
  EXPECT_EQ(r.rank, 2u);
  EXPECT_EQ(r.left_nullspace_basis.rows(), 3u);
  EXPECT_TRUE((r.left_nullspace_basis * a).is_zero());
}

TEST(RankAndNullspaces, ZeroMatrix) {
  auto r = rank_and_nullspaces(RationalMatrix(2, 2));
  EXPECT_EQ(r.rank, 0u);
  EXPECT_EQ(r.right_nullspace_basis.cols(), 2u);
  EXPECT_EQ(r.left_nullspace_basis.rows(), 2u);
}

TEST(RankAndNullspaces, EmptyRowsGiveFullNullspace) {
  auto r = rank_and_nullspaces(RationalMatrix(0, 3));
  EXPECT_EQ(r.rank, 0u);
  EXPECT_EQ(r.right_nullspace_basis.cols(), 3u);
}

TEST(RankAndNullspaces, BasisVectorsArePrimitive) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 40; ++t) {
    RationalMatrix m = to_rational(random_int_matrix(rng, 3, 5, 4));
    auto r = rank_and_nullspaces(m);
    EXPECT_EQ(r.rank + r.right_nullspace_basis.cols(), 5u);
    EXPECT_EQ(r.rank + r.left_nullspace_basis.rows(), 3u);
    EXPECT_TRUE((m * r.right_nullspace_basis).is_zero());
    EXPECT_TRUE((r.left_nullspace_basis * m).is_zero());
    for (std::size_t j = 0; j < r.right_nullspace_basis.cols(); ++j) {
      auto v = r.right_nullspace_basis.column(j);
      Integer g = 0;
      bool first_seen = false;
      for (const auto &x : v) {
        ASSERT_EQ(x.get_den(), 1);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num_mpz_t());
        if (!first_seen && x != 0) {
          EXPECT_GT(x, 0);
          first_seen = true;
        }
      }
      EXPECT_EQ(g, 1);
    }
  }
}

TEST(Hermite, Identity) {
  auto h = hermite_normal_form(IntMatrix::identity(2));
  EXPECT_EQ(h.rank, 2u);
  EXPECT_EQ(h.basis, IntMatrix::identity(2));
}

TEST(Hermite, TwoByTwo) {
  auto h = hermite_normal_form(imat({{2, 1}, {1, 2}}));
  EXPECT_EQ(h.basis, imat({{1, 2}, {0, 3}}));
}

TEST(Hermite, RepeatedRow) {
  auto h = hermite_normal_form(imat({{1, 1}, {1, 1}}));
  EXPECT_EQ(h.rank, 1u);
  EXPECT_EQ(h.basis, imat({{1, 1}}));
}

TEST(Hermite, RandomShapeTransformAndIdempotence) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    const std::size_t r = 1 + t % 4, c = 1 + (t / 4) % 5;
    IntMatrix m = random_int_matrix(rng, r, c, 6);
    auto h = hermite_normal_form(m);
    expect_hnf_shape(h);
    EXPECT_TRUE(is_unimodular(h.transform));
    IntMatrix full = h.transform * m;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        EXPECT_EQ(full(i, j), i < h.rank ? h.basis(i, j) : Integer(0));
    EXPECT_EQ(hermite_normal_form(h.basis).basis, h.basis);
  }
}

TEST(Smith, Examples) {
  EXPECT_EQ(smith_normal_form(imat({{2, 1}, {1, 2}})).diagonal, (IntVector{1, 3}));
  EXPECT_EQ(smith_normal_form(IntMatrix::identity(3)).diagonal, (IntVector{1, 1, 1}));
  EXPECT_EQ(smith_normal_form(imat({{2, 0}, {0, 2}})).diagonal, (IntVector{2, 2}));
}

TEST(Smith, FactorizationAndDivisibility) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 60; ++t) {
    const std::size_t r = 1 + t % 4, c = 1 + (t / 3) % 4;
    IntMatrix m = random_int_matrix(rng, r, c, 8);
    auto s = smith_normal_form(m);
    EXPECT_TRUE(is_unimodular(s.left));
    EXPECT_TRUE(is_unimodular(s.right));
    IntMatrix d = s.left * m * s.right;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        EXPECT_EQ(d(i, j), i == j ? s.diagonal[i] : Integer(0));
    for (std::size_t i = 0; i + 1 < s.diagonal.size(); ++i) {
      EXPECT_GE(s.diagonal[i], 0);
      if (s.diagonal[i] == 0) {
        EXPECT_EQ(s.diagonal[i + 1], 0);
        continue;
      }
      EXPECT_TRUE(mpz_divisible_p(s.diagonal[i + 1].get_mpz_t(), s.diagonal[i].get_mpz_t()));
    }
  }
}

TEST(LatticeIndex, SublatticeOfIndexThree) {
  auto idx = lattice_index(imat({{2, 1}, {1, 2}, {1, -1}}), IntMatrix::identity(2));
  ASSERT_FALSE(idx.is_infinite());
  EXPECT_EQ(*idx.value, 3);
}

TEST(LatticeIndex, TrivialCases) {
  EXPECT_TRUE(lattice_index(IntMatrix::identity(2), IntMatrix::identity(2)).is_one());
  EXPECT_EQ(*lattice_index(imat({{2, 0}, {0, 1}}), IntMatrix::identity(2)).value, 2);
  EXPECT_TRUE(lattice_index(imat({{1, 0}}), IntMatrix::identity(2)).is_infinite());
}

TEST(LatticeIndex, OutsideAmbientThrows) {
  try {
    (void)lattice_index(imat({{1, 0}}), imat({{2, 0}, {0, 1}}));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::NotASublattice);
  }
}

TEST(LatticeIndex, MatchesCofactorDeterminant) {
  std::mt19937_64 rng(17);
  int checked = 0;
  for (int t = 0; t < 200 && checked < 80; ++t) {
    const std::size_t n = 1 + t % 5;
    IntMatrix m = random_int_matrix(rng, n, n, 4);
    Integer det = qtest::cofactor_det(m);
    if (det == 0) continue;
    ++checked;
    EXPECT_EQ(determinant(m), det);
    auto idx = lattice_index(m, IntMatrix::identity(n));
    ASSERT_FALSE(idx.is_infinite());
    EXPECT_EQ(*idx.value, abs(det));
  }
  EXPECT_GE(checked, 50);
}

TEST(Cone, OneDimensional) {
  auto q = cone_membership({rvec({1}), rvec({1}), rvec({1})}, rvec({1}));
  EXPECT_TRUE(q.member);
  EXPECT_EQ(q.coefficients, rvec({1, 0, 0}));
}

TEST(Cone, NonMemberHasSeparatingFunctional) {
  auto q = cone_membership({rvec({2, 1})}, rvec({3, 0}));
  EXPECT_FALSE(q.member);
  EXPECT_TRUE(q.certificate_valid());
}

TEST(Cone, Orthant) {
  auto q = cone_membership({rvec({1, 0}), rvec({0, 1})}, rvec({1, 1}));
  EXPECT_TRUE(q.member);
  EXPECT_EQ(q.coefficients, rvec({1, 1}));
}

TEST(Cone, DimensionMismatch) {
  try {
    (void)cone_membership({rvec({1, 0})}, rvec({1}));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Cone, RandomCertificatesRecheck) {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<long> d(-3, 3);
  int members = 0, non_members = 0;
  for (int t = 0; t < 300; ++t) {
    const std::size_t dim = 1 + t % 3, n = 1 + t % 5;
    std::vector<RationalVector> gens(n, RationalVector(dim));
    for (auto &g : gens)
      for (auto &x : g) x = d(rng);
    RationalVector target(dim);
    for (auto &x : target) x = d(rng);
    auto q = cone_membership(gens, target);
    EXPECT_TRUE(q.certificate_valid());
    (q.member ? members : non_members)++;
  }
  EXPECT_GT(members, 20);
  EXPECT_GT(non_members, 20);
}
