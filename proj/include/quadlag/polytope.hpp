#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "quadlag/exact/cone.hpp"
#include "quadlag/exact/linalg.hpp"
#include "quadlag/quadrics.hpp"
#include "quadlag/subsets.hpp"

namespace quadlag {

/// P = { x in R^n : <a_i, x> + b_i >= 0, i = 1..m }, rows of `a` are the a_i.
class PolytopePresentation {
public:
  PolytopePresentation(RationalMatrix a, RationalVector b) : a_(std::move(a)), b_(std::move(b)) {
    if (b_.size() != a_.rows())
      throw Error(ErrorCode::DimensionMismatch, "offset count differs from normal count");
  }

  [[nodiscard]] const RationalMatrix &a() const noexcept { return a_; }
  [[nodiscard]] const RationalVector &b() const noexcept { return b_; }
  [[nodiscard]] std::size_t m() const noexcept { return a_.rows(); }
  [[nodiscard]] std::size_t n() const noexcept { return a_.cols(); }

  [[nodiscard]] RationalVector normal(std::size_t i) const { return a_.row_vector(i); }

  /// <a_i, x> + b_i
  [[nodiscard]] Rational slack(std::size_t i, std::span<const Rational> x) const {
    Rational s = b_[i];
    for (std::size_t k = 0; k < n(); ++k) s += a_(i, k) * x[k];
    return s;
  }

  [[nodiscard]] bool contains(std::span<const Rational> x) const {
    for (std::size_t i = 0; i < m(); ++i)
      if (slack(i, x) < 0) return false;
    return true;
  }

  [[nodiscard]] IndexSet active_set(std::span<const Rational> x) const {
    IndexSet out;
    for (std::size_t i = 0; i < m(); ++i)
      if (slack(i, x) == 0) out.push_back(i);
    return out;
  }

  [[nodiscard]] PolytopePresentation without(std::size_t i) const {
    IndexSet keep = complement({i}, m());
    RationalVector b;
    for (auto k : keep) b.push_back(b_[k]);
    return {a_.select_rows(keep), b};
  }

  friend bool operator==(const PolytopePresentation &, const PolytopePresentation &) = default;

private:
  RationalMatrix a_;
  RationalVector b_;
};

struct Vertex {
  RationalVector point;
  IndexSet active_set;
  friend bool operator==(const Vertex &, const Vertex &) = default;
};

struct GenericityReport {
  bool generic = false;
  bool feasible = false;
  bool dimension_full = false;
  bool has_vertex = false;
  std::optional<Vertex> violating_point;
  IndexSet redundant_strict;
  IndexSet redundant_touching;
  friend bool operator==(const GenericityReport &, const GenericityReport &) = default;
};

/// Every vertex: each n-subset of hyperplanes with an invertible normal matrix
/// is solved exactly, infeasible points dropped, duplicates merged and full
/// active sets recomputed. Sorted lexicographically by coordinates.
inline std::vector<Vertex> enumerate_vertices(const PolytopePresentation &p) {
  const std::size_t n = p.n();
  std::vector<RationalVector> points;
  for_each_subset(p.m(), n, [&](std::span<const std::size_t> idx) {
    RationalMatrix sys = p.a().select_rows(idx);
    RationalVector rhs(n);
    for (std::size_t r = 0; r < n; ++r) rhs[r] = -p.b()[idx[r]];
    auto x = solve_square(sys, rhs);
    if (x && p.contains(*x)) points.push_back(std::move(*x));
    return true;
  });
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<Vertex> out;
  out.reserve(points.size());
  for (auto &x : points) {
    IndexSet act = p.active_set(x);
    out.push_back({std::move(x), std::move(act)});
  }
  return out;
}

namespace detail {

inline std::vector<RationalVector> homogenized_rows(const PolytopePresentation &p) {
  std::vector<RationalVector> out;
  for (std::size_t i = 0; i < p.m(); ++i) {
    RationalVector g = p.normal(i);
    g.push_back(p.b()[i]);
    out.push_back(std::move(g));
  }
  return out;
}

inline bool normals_independent(const PolytopePresentation &p, const IndexSet &idx) {
  return rank(p.a().select_rows(idx)) == idx.size();
}

} // namespace detail

/// Farkas: P is empty iff (0,...,0,-1) is a nonnegative combination of (a_i, b_i).
inline bool is_feasible(const PolytopePresentation &p) {
  RationalVector target(p.n() + 1, Rational(0));
  target.back() = -1;
  return !cone_membership(detail::homogenized_rows(p), target).member;
}

/// Some x with <a_i,x> + b_i > 0 for every i. By Motzkin's transposition this
/// fails iff y >= 0, sum y = 1, y^T A = 0, y^T b <= 0 is solvable.
inline bool is_full_dimensional(const PolytopePresentation &p) {
  const std::size_t d = p.n() + 2;
  std::vector<RationalVector> gens;
  for (std::size_t i = 0; i < p.m(); ++i) {
    RationalVector g = p.normal(i);
    g.push_back(p.b()[i]);
    g.push_back(1);
    gens.push_back(std::move(g));
  }
  RationalVector slack(d, Rational(0));
  slack[p.n()] = 1;
  gens.push_back(std::move(slack));
  RationalVector target(d, Rational(0));
  target.back() = 1;
  return !cone_membership(gens, target).member;
}

/// Inequality i is implied by the others (affine Farkas, P nonempty) iff
/// (a_i, b_i) lies in cone{(a_j, b_j) : j != i} + cone{(0, 1)}.
inline bool is_redundant(const PolytopePresentation &p, std::size_t i) {
  auto rows = detail::homogenized_rows(p);
  RationalVector target = rows[i];
  rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(i));
  RationalVector lift(p.n() + 1, Rational(0));
  lift.back() = 1;
  rows.push_back(std::move(lift));
  return cone_membership(rows, target).member;
}

/// Generic means: n-dimensional, has a vertex, and the normals of the
/// hyperplanes through any point of P are independent. Every face of a pointed
/// polyhedron contains a vertex and the active set only grows towards it, so
/// checking vertices covers every point.
inline GenericityReport check_generic(const PolytopePresentation &p) {
  GenericityReport rep;
  rep.feasible = is_feasible(p);
  if (!rep.feasible) return rep;
  rep.dimension_full = is_full_dimensional(p);
  const auto vertices = enumerate_vertices(p);
  rep.has_vertex = !vertices.empty();
  for (const auto &v : vertices)
    if (!detail::normals_independent(p, v.active_set)) {
      rep.violating_point = v;
      break;
    }
  if (rep.has_vertex) {
    std::vector<bool> tight(p.m(), false);
    for (const auto &v : vertices)
      for (auto i : v.active_set) tight[i] = true;
    for (std::size_t i = 0; i < p.m(); ++i) {
      if (!tight[i]) rep.redundant_strict.push_back(i);
      else if (is_redundant(p, i)) rep.redundant_touching.push_back(i);
    }
  }
  rep.generic = rep.dimension_full && rep.has_vertex && !rep.violating_point;
  return rep;
}

/// The recession cone {x : A x >= 0} is the dual of cone(a_i); it is {0}
/// exactly when the normals positively span R^n. For nonempty P this is
/// boundedness.
inline bool is_bounded(const PolytopePresentation &p) {
  std::vector<RationalVector> normals;
  for (std::size_t i = 0; i < p.m(); ++i) normals.push_back(p.normal(i));
  for (std::size_t k = 0; k < p.n(); ++k)
    for (int sign : {1, -1}) {
      RationalVector e(p.n(), Rational(0));
      e[k] = sign;
      if (!cone_membership(normals, e).member) return false;
    }
  return true;
}

/// Raw quadrics -> polyhedron conversion: b is the RREF basic solution of
/// Gamma y = c (free variables zero), the columns of A are the primitive
/// right-nullspace basis of Gamma. nullopt when Gamma lacks full row rank or
/// the linear system is inconsistent; no nondegeneracy check.
inline std::optional<PolytopePresentation> presentation_of(const QuadricSystem &s) {
  if (rank(s.gamma()) != s.quadrics()) return std::nullopt;
  auto b = particular_solution(s.gamma(), s.c());
  if (!b) return std::nullopt;
  RationalMatrix a = right_nullspace(s.gamma()); // m x n
  if (!(s.gamma() * a).is_zero() || s.gamma() * *b != s.c())
    throw Error(ErrorCode::Internal, "conversion identities failed");
  return PolytopePresentation(std::move(a), std::move(*b));
}

inline PolytopePresentation to_polytope(const QuadricSystem &s) {
  require_nondegenerate(s);
  auto p = presentation_of(s);
  if (!p) throw Error(ErrorCode::DegenerateSystem, "Gamma does not have full row rank");
  return std::move(*p);
}

/// Rows of Gamma: primitive left-nullspace basis of A, so Gamma A = 0; c = Gamma b.
inline QuadricSystem to_quadrics(const PolytopePresentation &p) {
  if (!check_generic(p).generic)
    throw Error(ErrorCode::NonGenericPresentation, "presentation is not generic");
  RationalMatrix gamma = left_nullspace(p.a());
  if (gamma.rows() == 0)
    throw Error(ErrorCode::NonGenericPresentation, "m = n leaves no quadrics");
  RationalVector c = gamma * p.b();
  if (!(gamma * p.a()).is_zero())
    throw Error(ErrorCode::Internal, "Gamma A != 0");
  return {std::move(gamma), std::move(c)};
}

/// Active sets of all faces of a generic presentation: every subset of a vertex
/// active set (faces are pointed, and in general position any subset of the
/// hyperplanes at a vertex cuts out a face). The empty set is always present.
inline std::set<IndexSet> face_active_sets(const PolytopePresentation &p) {
  if (!check_generic(p).generic)
    throw Error(ErrorCode::NonGenericPresentation, "presentation is not generic");
  std::set<IndexSet> out;
  for (const auto &v : enumerate_vertices(p)) {
    const auto &act = v.active_set;
    const std::size_t k = act.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
      IndexSet sub;
      for (std::size_t i = 0; i < k; ++i)
        if (mask >> i & 1U) sub.push_back(act[i]);
      out.insert(std::move(sub));
    }
  }
  return out;
}

/// Maximal face active sets, i.e. the vertex active sets, sorted as index sets.
inline std::vector<IndexSet> vertex_active_sets(const PolytopePresentation &p) {
  std::vector<IndexSet> out;
  for (const auto &v : enumerate_vertices(p)) out.push_back(v.active_set);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

} // namespace quadlag
