#include <gtest/gtest.h>

#include <quadlag/corpus.hpp>
#include <quadlag/topology.hpp>

#include "support.hpp"

using namespace quadlag;
using qtest::rmat;
using qtest::rvec;

namespace {

std::vector<RationalVector> vertex_points(const PolytopePresentation &p) {
  std::vector<RationalVector> out;
  for (const auto &v : enumerate_vertices(p)) out.push_back(v.point);
  return out;
}

} // namespace

TEST(Recipe, ProductOfIntervalsIsSquare) {
  auto p = build("product(simplex(1),simplex(1))");
  EXPECT_EQ(vertex_points(p), vertex_points(qtest::square()));
  EXPECT_TRUE(delzant_check(p).embeds);
  EXPECT_EQ(p, cube(2));
}

TEST(Recipe, CutSimplexIsDelzantQuadrilateral) {
  auto p = build("vertex_cut(simplex(2),0,1/2)");
  EXPECT_EQ(p.m(), 4u);
  EXPECT_TRUE(check_generic(p).generic);
  EXPECT_EQ(enumerate_vertices(p).size(), 4u);
  EXPECT_TRUE(delzant_check(p).embeds);
  // Cut functional x + y >= 1/2.
  EXPECT_EQ(p.normal(3), rvec({1, 1}));
  EXPECT_EQ(p.b()[3], make_rational(-1, 2));
}

TEST(Recipe, Cube3) {
  auto p = build("cube(3)");
  EXPECT_EQ(p.m(), 6u);
  EXPECT_EQ(p.n(), 3u);
  EXPECT_EQ(enumerate_vertices(p).size(), 8u);
  EXPECT_TRUE(delzant_check(p).embeds);
}

TEST(Recipe, CutSquareGivesPentagonTopology) {
  auto r = classify(to_quadrics(build("vertex_cut(cube(2),3,1/2)")));
  EXPECT_EQ(r.genus, 5u);
  EXPECT_TRUE(r.embeds);
  EXPECT_EQ(r.z_note, "connected sum of 5 copies of S^3 x S^4");
}

TEST(Recipe, TextRoundTrip) {
  for (const auto &text : delzant_recipes()) EXPECT_EQ(to_string(parse_recipe(text)), text);
  EXPECT_EQ(to_string(parse_recipe(" product( simplex(1) , cube(2) ) ")), "product(simplex(1),cube(2))");
  EXPECT_EQ(to_string(parse_recipe("vertex_cut(simplex(2),0,2/4)")), "vertex_cut(simplex(2),0,1/2)");
}

TEST(Recipe, MalformedInputs) {
  for (const char *bad : {"simplex(0)", "foo(1)", "product(simplex(1))", "vertex_cut(simplex(2),0,0)",
                          "vertex_cut(simplex(2),0,1/0)", "cube(2", "cube(2))", "", "random(3,1,0)",
                          "vertex_cut(simplex(2),9,1/2)", "random(2,2,3)"})
    EXPECT_EQ(qtest::error_code_of([&] { (void)build(bad); }), ErrorCode::MalformedRecipe) << bad;
}

TEST(Recipe, CutTooDeep) {
  // The adjacent vertices of the origin sit at functional value 1.
  EXPECT_EQ(qtest::error_code_of([] { (void)build("vertex_cut(simplex(2),0,1)"); }), ErrorCode::CutTooDeep);
  EXPECT_EQ(qtest::error_code_of([] { (void)build("vertex_cut(simplex(2),0,3/2)"); }), ErrorCode::CutTooDeep);
  EXPECT_NO_THROW((void)build("vertex_cut(simplex(2),0,99/100)"));
}

TEST(Corpus, DelzantRecipesAreGenericAndDelzant) {
  for (const auto &text : delzant_recipes()) {
    auto p = build(text);
    EXPECT_TRUE(check_generic(p).generic) << text;
    EXPECT_TRUE(delzant_check(p).embeds) << text;
    EXPECT_EQ(build(text), p) << text;
  }
  for (std::size_t m = 3; m <= 9; ++m) {
    auto p = delzant_polygon(m);
    EXPECT_EQ(p.m(), m);
    EXPECT_EQ(enumerate_vertices(p).size(), m);
    EXPECT_TRUE(delzant_check(p).embeds) << m;
  }
}

TEST(Corpus, MutantsAreNotDelzant) {
  auto mutants = non_delzant_mutants();
  EXPECT_GE(mutants.size(), 20u);
  for (const auto &p : mutants) {
    ASSERT_TRUE(check_generic(p).generic);
    auto v = delzant_check(p);
    EXPECT_FALSE(v.embeds);
    ASSERT_TRUE(v.witness);
    EXPECT_GT(*v.witness->index.value, 1);
  }
}

TEST(RandomSystem, ValidatesAndRoundTrips) {
  auto a = random_system(5, 2, 1, 3);
  EXPECT_TRUE(validate(a.system).nonempty_nondegenerate);
  EXPECT_EQ(random_system(5, 2, 1, 3).system, a.system);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto s = random_system(4 + seed % 4, 1 + seed % 3, seed, 2).system;
    ASSERT_TRUE(validate(s).nonempty_nondegenerate);
    auto back = to_quadrics(to_polytope(s));
    EXPECT_TRUE(row_space_contains(back.gamma(), s.gamma()));
    EXPECT_TRUE(row_space_contains(s.gamma(), back.gamma()));
  }
  auto one = random_system(2, 1, 9, 3).system;
  EXPECT_EQ(one.quadrics(), 1u);
}

TEST(RandomSystem, BadParameters) {
  EXPECT_EQ(qtest::error_code_of([] { (void)random_system(5, 2, 1, 0); }), ErrorCode::MalformedRecipe);
  EXPECT_EQ(qtest::error_code_of([] { (void)random_system(3, 3, 1, 2); }), ErrorCode::MalformedRecipe);
}

TEST(RandomSystem, RawDrawsCoverBothVerdicts) {
  std::mt19937_64 rng(5);
  int good = 0, bad = 0;
  for (int t = 0; t < 60; ++t) {
    auto s = raw_random_system(4 + t % 3, 1 + t % 2, rng, 2);
    const bool ok = validate(s).nonempty_nondegenerate;
    auto p = presentation_of(s);
    EXPECT_EQ(ok, p && check_generic(*p).generic) << t;
    (ok ? good : bad)++;
  }
  EXPECT_GT(good, 5);
  EXPECT_GT(bad, 5);
}
