#pragma once

#include <cctype>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "quadlag/lattice_torus.hpp"

namespace quadlag {

enum class RecipeKind { Simplex, Cube, Product, VertexCut, Random };

/// Expression tree: simplex(n), cube(n), product(P,Q), vertex_cut(P, vertex, depth),
/// random(m, n, bound). Vertex indices follow enumerate_vertices order, 0-based.
struct Recipe {
  RecipeKind kind = RecipeKind::Simplex;
  std::size_t dim = 0;     // simplex/cube dimension, random m
  std::size_t second = 0;  // vertex index for cuts, random n
  Rational depth = 0;      // cut depth
  long bound = 0;          // random coefficient bound
  std::vector<Recipe> children;
  friend bool operator==(const Recipe &, const Recipe &) = default;
};

inline std::string to_string(const Recipe &r) {
  switch (r.kind) {
  case RecipeKind::Simplex: return "simplex(" + std::to_string(r.dim) + ")";
  case RecipeKind::Cube: return "cube(" + std::to_string(r.dim) + ")";
  case RecipeKind::Product: return "product(" + to_string(r.children[0]) + "," + to_string(r.children[1]) + ")";
  case RecipeKind::VertexCut:
    return "vertex_cut(" + to_string(r.children[0]) + "," + std::to_string(r.second) + "," + r.depth.get_str() + ")";
  case RecipeKind::Random:
    return "random(" + std::to_string(r.dim) + "," + std::to_string(r.second) + "," + std::to_string(r.bound) + ")";
  }
  return "";
}

namespace detail {

class RecipeParser {
public:
  explicit RecipeParser(std::string_view text) : text_(text) {}

  Recipe parse() {
    Recipe r = expression();
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters");
    return r;
  }

private:
  [[noreturn]] void fail(const std::string &what) const {
    throw Error(ErrorCode::MalformedRecipe, what + " at offset " + std::to_string(pos_) + " in '" +
                                                std::string(text_) + "'");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string token(auto &&accept) {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && accept(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected a token");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::size_t count() {
    const std::string t = token([](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
    if (t.size() > 6) fail("number too large");
    return std::stoul(t);
  }

  Rational rational() {
    const std::string t = token([](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-'; });
    Rational q;
    try {
      q = Rational(t);
    } catch (const std::invalid_argument &) {
      fail("bad rational '" + t + "'");
    }
    if (q.get_den() == 0) fail("zero denominator");
    q.canonicalize();
    return q;
  }

  Recipe expression() {
    const std::string name = token([](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; });
    Recipe r;
    expect('(');
    if (name == "simplex" || name == "cube") {
      r.kind = name == "simplex" ? RecipeKind::Simplex : RecipeKind::Cube;
      r.dim = count();
      if (r.dim == 0) fail("dimension must be positive");
    } else if (name == "product") {
      r.kind = RecipeKind::Product;
      r.children.push_back(expression());
      expect(',');
      r.children.push_back(expression());
    } else if (name == "vertex_cut") {
      r.kind = RecipeKind::VertexCut;
      r.children.push_back(expression());
      expect(',');
      r.second = count();
      expect(',');
      r.depth = rational();
      if (r.depth <= 0) fail("cut depth must be positive");
    } else if (name == "random") {
      r.kind = RecipeKind::Random;
      r.dim = count();
      expect(',');
      r.second = count();
      expect(',');
      r.bound = static_cast<long>(count());
    } else {
      fail("unknown primitive '" + name + "'");
    }
    expect(')');
    return r;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

} // namespace detail

inline Recipe parse_recipe(std::string_view text) { return detail::RecipeParser(text).parse(); }

/// Standard simplex: x_i >= 0 and 1 - sum x_i >= 0.
inline PolytopePresentation simplex(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::MalformedRecipe, "simplex dimension must be positive");
  RationalMatrix a(n + 1, n);
  RationalVector b(n + 1, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = 1;
    a(n, i) = -1;
  }
  b[n] = 1;
  return {a, b};
}

/// Inequalities of p, then those of q, acting on separate coordinate blocks.
inline PolytopePresentation product(const PolytopePresentation &p, const PolytopePresentation &q) {
  RationalMatrix a(p.m() + q.m(), p.n() + q.n());
  RationalVector b = p.b();
  b.insert(b.end(), q.b().begin(), q.b().end());
  for (std::size_t i = 0; i < p.m(); ++i)
    for (std::size_t k = 0; k < p.n(); ++k) a(i, k) = p.a()(i, k);
  for (std::size_t i = 0; i < q.m(); ++i)
    for (std::size_t k = 0; k < q.n(); ++k) a(p.m() + i, p.n() + k) = q.a()(i, k);
  return {a, b};
}

inline PolytopePresentation cube(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::MalformedRecipe, "cube dimension must be positive");
  PolytopePresentation out = simplex(1);
  for (std::size_t i = 1; i < n; ++i) out = product(out, simplex(1));
  return out;
}

/// Cuts vertex `vertex` with the functional sum_i w_i (<a_i, x> + b_i) >= depth
/// over its active set. Unit weights keep a Delzant polytope Delzant. The cut
/// must leave every other vertex strictly on the kept side.
inline PolytopePresentation weighted_vertex_cut(const PolytopePresentation &p, std::size_t vertex,
                                                const Rational &depth, const std::vector<long> &weights) {
  if (depth <= 0) throw Error(ErrorCode::MalformedRecipe, "cut depth must be positive");
  const auto vertices = enumerate_vertices(p);
  if (vertex >= vertices.size())
    throw Error(ErrorCode::MalformedRecipe, "vertex index " + std::to_string(vertex) + " out of range");
  const IndexSet &act = vertices[vertex].active_set;
  if (act.size() != p.n()) throw Error(ErrorCode::NonGenericPresentation, "vertex is not simple");
  if (weights.size() != act.size()) throw Error(ErrorCode::DimensionMismatch, "one weight per active facet");

  RationalVector normal(p.n(), Rational(0));
  Rational offset = -depth;
  for (std::size_t t = 0; t < act.size(); ++t) {
    for (std::size_t k = 0; k < p.n(); ++k) normal[k] += weights[t] * p.a()(act[t], k);
    offset += weights[t] * p.b()[act[t]];
  }
  for (std::size_t w = 0; w < vertices.size(); ++w) {
    if (w == vertex) continue;
    if (dot(normal, vertices[w].point) + offset <= 0)
      throw Error(ErrorCode::CutTooDeep, "depth " + depth.get_str() + " reaches vertex " + std::to_string(w));
  }
  RationalMatrix a(p.m() + 1, p.n());
  for (std::size_t i = 0; i < p.m(); ++i)
    for (std::size_t k = 0; k < p.n(); ++k) a(i, k) = p.a()(i, k);
  for (std::size_t k = 0; k < p.n(); ++k) a(p.m(), k) = normal[k];
  RationalVector b = p.b();
  b.push_back(offset);
  return {a, b};
}

inline PolytopePresentation vertex_cut(const PolytopePresentation &p, std::size_t vertex, const Rational &depth) {
  return weighted_vertex_cut(p, vertex, depth, std::vector<long>(p.n(), 1));
}

/// Half the smallest value of the cut functional over the other vertices: a
/// depth that is always admissible.
inline Rational safe_cut_depth(const PolytopePresentation &p, std::size_t vertex, const std::vector<long> &weights) {
  const auto vertices = enumerate_vertices(p);
  const IndexSet &act = vertices.at(vertex).active_set;
  std::optional<Rational> best;
  for (std::size_t w = 0; w < vertices.size(); ++w) {
    if (w == vertex) continue;
    Rational v = 0;
    for (std::size_t t = 0; t < act.size(); ++t) v += weights[t] * p.slack(act[t], vertices[w].point);
    if (!best || v < *best) best = v;
  }
  return best ? *best / 2 : Rational(1);
}

struct RandomSystem {
  QuadricSystem system;
  std::size_t rejections = 0;
};

/// Integer Gamma uniform in [-bound, bound], c = Gamma y with y_k in
/// [1, bound], redrawn until validate passes.
inline RandomSystem random_system(std::size_t m, std::size_t n, std::uint64_t seed, long bound) {
  if (bound < 1) throw Error(ErrorCode::MalformedRecipe, "coefficient bound must be at least 1");
  if (m == 0 || n >= m) throw Error(ErrorCode::MalformedRecipe, "need 1 <= m-n <= m");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> entry(-bound, bound), weight(1, bound);
  const std::size_t r = m - n;
  for (std::size_t rejections = 0; rejections < 1000; ++rejections) {
    RationalMatrix g(r, m);
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t k = 0; k < m; ++k) g(j, k) = entry(rng);
    RationalVector y(m);
    for (auto &x : y) x = weight(rng);
    QuadricSystem s(g, g * y);
    if (validate(s).nonempty_nondegenerate) return {std::move(s), rejections};
  }
  throw Error(ErrorCode::ExhaustedAttempts, "1000 random systems failed validation");
}

/// Unfiltered draws: y_k in [0, bound] so c may sit on lower-dimensional cones,
/// and every fourth draw has c uniform, often outside the cone.
inline QuadricSystem raw_random_system(std::size_t m, std::size_t n, std::mt19937_64 &rng, long bound) {
  std::uniform_int_distribution<long> entry(-bound, bound), weight(0, bound), pick(0, 3);
  const std::size_t r = m - n;
  RationalMatrix g(r, m);
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t k = 0; k < m; ++k) g(j, k) = entry(rng);
  RationalVector c;
  if (pick(rng) == 0) {
    c.resize(r);
    for (auto &x : c) x = entry(rng);
  } else {
    RationalVector y(m);
    for (auto &x : y) x = weight(rng);
    c = g * y;
  }
  return {g, c};
}

inline PolytopePresentation build(const Recipe &r, std::uint64_t seed = 0) {
  switch (r.kind) {
  case RecipeKind::Simplex: return simplex(r.dim);
  case RecipeKind::Cube: return cube(r.dim);
  case RecipeKind::Product: return product(build(r.children.at(0), seed), build(r.children.at(1), seed));
  case RecipeKind::VertexCut: return vertex_cut(build(r.children.at(0), seed), r.second, r.depth);
  case RecipeKind::Random: return to_polytope(random_system(r.dim, r.second, seed, r.bound).system);
  }
  throw Error(ErrorCode::MalformedRecipe, "unknown recipe kind");
}

inline PolytopePresentation build(std::string_view recipe, std::uint64_t seed = 0) {
  return build(parse_recipe(recipe), seed);
}

/// Two-quadric realization of N_k(p,q): k columns (1,1), p-k columns (1,0),
/// q columns (0,1), c = (1,2).
inline QuadricSystem two_quadric_system(std::size_t k, std::size_t p, std::size_t q) {
  if (p == 0 || q == 0 || k > p) throw Error(ErrorCode::MalformedRecipe, "need 0 <= k <= p, p > 0, q > 0");
  RationalMatrix g(2, p + q);
  for (std::size_t i = 0; i < p + q; ++i) {
    g(0, i) = i < p ? 1 : 0;
    g(1, i) = (i < k || i >= p) ? 1 : 0;
  }
  RationalVector c(2);
  c[0] = 1;
  c[1] = 2;
  return {g, c};
}

/// Polygon through counterclockwise integer points, primitive inward normals.
inline PolytopePresentation polygon_through(const std::vector<std::pair<long, long>> &pts) {
  const std::size_t m = pts.size();
  if (m < 3) throw Error(ErrorCode::NotAPolygon, "need at least 3 points");
  RationalMatrix a(m, 2);
  RationalVector b(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto [x0, y0] = pts[i];
    const auto [x1, y1] = pts[(i + 1) % m];
    long nx = y0 - y1, ny = x1 - x0;
    const long g = std::gcd(nx, ny);
    if (g == 0) throw Error(ErrorCode::NotAPolygon, "repeated point");
    nx /= g;
    ny /= g;
    a(i, 0) = nx;
    a(i, 1) = ny;
    b[i] = -(nx * x0 + ny * y0);
  }
  return {a, b};
}

/// m-gon with vertices (i, i^2), i = 0..m-1.
inline PolytopePresentation parabola_polygon(std::size_t m) {
  std::vector<std::pair<long, long>> pts;
  for (long i = 0; i < static_cast<long>(m); ++i) pts.emplace_back(i, i * i);
  return polygon_through(pts);
}

/// Delzant m-gon: the triangle cut at vertex 0 until it has m edges.
inline PolytopePresentation delzant_polygon(std::size_t m) {
  if (m < 3) throw Error(ErrorCode::NotAPolygon, "need m >= 3");
  PolytopePresentation p = simplex(2);
  const std::vector<long> unit{1, 1};
  while (p.m() < m) p = vertex_cut(p, 0, safe_cut_depth(p, 0, unit));
  return p;
}

/// Recipes that build Delzant polytopes.
inline std::vector<std::string> delzant_recipes() {
  return {"simplex(1)",
          "simplex(2)",
          "simplex(3)",
          "simplex(4)",
          "cube(2)",
          "cube(3)",
          "cube(4)",
          "product(simplex(1),simplex(1))",
          "product(simplex(2),simplex(1))",
          "product(simplex(2),simplex(2))",
          "product(cube(2),simplex(2))",
          "vertex_cut(simplex(2),0,1/2)",
          "vertex_cut(simplex(3),0,1/3)",
          "vertex_cut(cube(2),3,1/2)",
          "vertex_cut(cube(3),7,1/2)",
          "vertex_cut(vertex_cut(cube(2),3,1/2),0,1/3)",
          "vertex_cut(vertex_cut(simplex(2),0,1/2),2,1/4)",
          "vertex_cut(product(simplex(2),simplex(1)),0,1/2)",
          "product(vertex_cut(simplex(2),0,1/2),simplex(1))"};
}

/// Non-Delzant polytopes: weighted cuts of Delzant recipes, where a weight
/// w > 1 gives a corner of index w.
inline std::vector<PolytopePresentation> non_delzant_mutants() {
  std::vector<PolytopePresentation> out;
  const std::vector<std::string> bases{"simplex(2)", "cube(2)", "simplex(3)", "cube(3)",
                                       "product(simplex(2),simplex(1))", "vertex_cut(simplex(2),0,1/2)"};
  for (const auto &text : bases) {
    const PolytopePresentation base = build(text);
    const std::size_t n = base.n();
    for (long w : {2L, 3L})
      for (std::size_t vertex : {std::size_t{0}, std::size_t{1}}) {
        std::vector<long> weights(n, 1);
        weights[vertex % n] = w;
        out.push_back(weighted_vertex_cut(base, vertex, safe_cut_depth(base, vertex, weights), weights));
      }
  }
  return out;
}

inline std::vector<PolytopePresentation> polytope_corpus() {
  std::vector<PolytopePresentation> out;
  for (const auto &r : delzant_recipes()) out.push_back(build(r));
  for (std::size_t m = 3; m <= 9; ++m) {
    out.push_back(delzant_polygon(m));
    out.push_back(parabola_polygon(m));
  }
  for (auto &p : non_delzant_mutants()) out.push_back(std::move(p));
  return out;
}

} // namespace quadlag
