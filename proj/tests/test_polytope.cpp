#include <gtest/gtest.h>

#include <quadlag/polytope.hpp>

#include <random>

#include "support.hpp"

using namespace quadlag;
using qtest::rmat;
using qtest::rvec;

namespace {

std::vector<RationalVector> points(const std::vector<Vertex> &vs) {
  std::vector<RationalVector> out;
  for (const auto &v : vs) out.push_back(v.point);
  return out;
}

// Brute-force recession test over a small integer box: some nonzero x with
// Ax >= 0 exists among the box points iff unbounded (for these small examples).
bool has_integer_recession_direction(const PolytopePresentation &p, long box) {
  const std::size_t n = p.n();
  std::vector<long> x(n, -box);
  for (;;) {
    bool nonzero = false, ok = true;
    for (auto v : x) nonzero = nonzero || v != 0;
    for (std::size_t i = 0; i < p.m() && ok; ++i) {
      Rational s = 0;
      for (std::size_t k = 0; k < n; ++k) s += p.a()(i, k) * x[k];
      ok = s >= 0;
    }
    if (nonzero && ok) return true;
    std::size_t k = 0;
    while (k < n && x[k] == box) x[k++] = -box;
    if (k == n) return false;
    ++x[k];
  }
}

} // namespace

TEST(Vertices, Pentagon) {
  auto vs = enumerate_vertices(qtest::pentagon());
  EXPECT_EQ(points(vs), (std::vector<RationalVector>{rvec({0, 0}), rvec({0, 2}), rvec({1, 2}),
                                                      rvec({2, 0}), rvec({2, 1})}));
  for (const auto &v : vs) EXPECT_EQ(v.active_set.size(), 2u);
}

TEST(Vertices, SimplexAndHalfPlane) {
  EXPECT_EQ(enumerate_vertices(qtest::simplex2()).size(), 3u);
  PolytopePresentation half(rmat({{1, 0}}), rvec({0}));
  EXPECT_TRUE(enumerate_vertices(half).empty());
  EXPECT_TRUE(is_feasible(half));
  EXPECT_FALSE(check_generic(half).generic);
}

TEST(Vertices, Infeasible) {
  PolytopePresentation empty(rmat({{1}, {-1}}), rvec({-2, 1}));
  EXPECT_FALSE(is_feasible(empty));
  EXPECT_TRUE(enumerate_vertices(empty).empty());
  auto r = check_generic(empty);
  EXPECT_FALSE(r.feasible);
  EXPECT_FALSE(r.generic);
}

TEST(Generic, Pentagon) {
  auto r = check_generic(qtest::pentagon());
  EXPECT_TRUE(r.generic);
  EXPECT_TRUE(r.redundant_strict.empty());
  EXPECT_TRUE(r.redundant_touching.empty());
}

TEST(Generic, TouchingRedundancyBreaksGenericity) {
  PolytopePresentation p(rmat({{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}}), rvec({0, 0, 1, 1, 0}));
  auto r = check_generic(p);
  EXPECT_FALSE(r.generic);
  ASSERT_TRUE(r.violating_point);
  EXPECT_EQ(r.violating_point->point, rvec({0, 0}));
  EXPECT_EQ(r.violating_point->active_set, (IndexSet{0, 1, 4}));
  EXPECT_EQ(r.redundant_touching, (IndexSet{4}));
}

TEST(Generic, StrictRedundancyAllowed) {
  PolytopePresentation p(rmat({{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}}), rvec({0, 0, 1, 1, 1}));
  auto r = check_generic(p);
  EXPECT_TRUE(r.generic);
  EXPECT_EQ(r.redundant_strict, (IndexSet{4}));
}

TEST(Generic, LowerDimensional) {
  // x >= 0 and -x >= 0 in R^1: a point, not full-dimensional.
  PolytopePresentation p(rmat({{1}, {-1}}), rvec({0, 0}));
  auto r = check_generic(p);
  EXPECT_TRUE(r.feasible);
  EXPECT_FALSE(r.dimension_full);
  EXPECT_FALSE(r.generic);
}

TEST(Bounded, AgreesWithRecessionSearch) {
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<long> d(-2, 2);
  int bounded = 0, unbounded = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 2 + t % 4;
    RationalMatrix a(m, 2);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < 2; ++k) a(i, k) = d(rng);
    PolytopePresentation p(a, RationalVector(m, Rational(1)));
    // Small integer normals: a recession ray, if any, has a direction with
    // coordinates bounded by 4 (cross product of two normals).
    const bool b = is_bounded(p);
    EXPECT_EQ(b, !has_integer_recession_direction(p, 4));
    (b ? bounded : unbounded)++;
  }
  EXPECT_GT(bounded, 10);
  EXPECT_GT(unbounded, 10);
}

TEST(Convert, SphereGivesTriangle) {
  auto p = to_polytope(QuadricSystem(rmat({{1, 1, 1}}), rvec({1})));
  EXPECT_EQ(p.m(), 3u);
  EXPECT_EQ(p.n(), 2u);
  EXPECT_TRUE(check_generic(p).generic);
  EXPECT_EQ(enumerate_vertices(p).size(), 3u);
  EXPECT_TRUE(is_bounded(p));
}

TEST(Convert, CliffordIsAPoint) {
  auto p = to_polytope(QuadricSystem(RationalMatrix::identity(2), rvec({1, 1})));
  EXPECT_EQ(p.n(), 0u);
  EXPECT_EQ(p.b(), rvec({1, 1}));
  EXPECT_TRUE(check_generic(p).generic);
  EXPECT_EQ(enumerate_vertices(p).size(), 1u);
}

TEST(Convert, DegenerateRejected) {
  EXPECT_EQ(qtest::error_code_of([] { (void)to_polytope(QuadricSystem(rmat({{1, 1}}), rvec({0}))); }),
            ErrorCode::DegenerateSystem);
  EXPECT_EQ(qtest::error_code_of([] {
              (void)to_quadrics(PolytopePresentation(rmat({{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}}),
                                                     rvec({0, 0, 1, 1, 0})));
            }),
            ErrorCode::NonGenericPresentation);
}

TEST(Convert, SimplexToSphere) {
  auto s = to_quadrics(qtest::simplex2());
  EXPECT_EQ(s.gamma(), rmat({{1, 1, 1}}));
  EXPECT_EQ(s.c(), rvec({1}));
}

TEST(Convert, SquareToTwoCircles) {
  auto s = to_quadrics(qtest::square());
  ASSERT_EQ(s.quadrics(), 2u);
  RationalMatrix expected = rmat({{1, 0, 1, 0}, {0, 1, 0, 1}});
  EXPECT_TRUE(row_space_contains(s.gamma(), expected));
  EXPECT_TRUE(row_space_contains(expected, s.gamma()));
  // Each row sums u_i^2 + u_j^2 = 1.
  for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(s.c()[j], 1);
}

TEST(Convert, PentagonIdentitiesAndRoundTrip) {
  auto p = qtest::pentagon();
  auto s = to_quadrics(p);
  EXPECT_EQ(s.quadrics(), 3u);
  EXPECT_TRUE((s.gamma() * p.a()).is_zero());
  EXPECT_EQ(s.gamma() * p.b(), s.c());
  EXPECT_TRUE(validate(s).nonempty_nondegenerate);
  auto p2 = to_polytope(s);
  EXPECT_TRUE(check_generic(p2).generic);
  EXPECT_EQ(enumerate_vertices(p2).size(), 5u);
  auto s2 = to_quadrics(p2);
  EXPECT_TRUE(row_space_contains(s.gamma(), s2.gamma()));
  EXPECT_TRUE(row_space_contains(s2.gamma(), s.gamma()));
}

TEST(Faces, Pentagon) {
  auto p = qtest::pentagon();
  auto faces = face_active_sets(p);
  EXPECT_TRUE(faces.count(IndexSet{}));
  auto maximal = vertex_active_sets(p);
  EXPECT_EQ(maximal, (std::vector<IndexSet>{{0, 1}, {0, 3}, {1, 2}, {2, 4}, {3, 4}}));
  // 1 empty set, 5 facets, 5 vertices.
  EXPECT_EQ(faces.size(), 11u);
  for (const auto &f : faces) EXPECT_LE(f.size(), 2u);
}

TEST(Faces, SimplexVertex) {
  for (const auto &v : enumerate_vertices(qtest::simplex2())) EXPECT_EQ(v.active_set.size(), 2u);
}
