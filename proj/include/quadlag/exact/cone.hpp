#pragma once

#include <optional>
#include <vector>

#include "quadlag/exact/linalg.hpp"
#include "quadlag/subsets.hpp"

namespace quadlag {

/// Verdict of `target ∈ cone(generators)` with a checkable certificate:
/// nonnegative coefficients reproducing the target, or a functional that is
/// nonnegative on every generator and negative on the target.
struct ConeQuery {
  std::vector<RationalVector> generators;
  RationalVector target;
  bool member = false;
  RationalVector coefficients; // one per generator, when member
  RationalVector functional;   // length d, when not a member

  [[nodiscard]] bool certificate_valid() const;
};

inline bool ConeQuery::certificate_valid() const {
  const std::size_t d = target.size();
  if (member) {
    if (coefficients.size() != generators.size()) return false;
    RationalVector sum(d, Rational(0));
    for (std::size_t i = 0; i < generators.size(); ++i) {
      if (coefficients[i] < 0) return false;
      for (std::size_t k = 0; k < d; ++k) sum[k] += coefficients[i] * generators[i][k];
    }
    return sum == target;
  }
  if (functional.size() != d) return false;
  if (dot(functional, target) >= 0) return false;
  for (const auto &g : generators)
    if (dot(functional, g) < 0) return false;
  return true;
}

namespace detail {

inline RationalMatrix columns_of(const std::vector<RationalVector> &vs,
                                 std::span<const std::size_t> idx, std::size_t d) {
  RationalMatrix m(d, idx.size());
  for (std::size_t c = 0; c < idx.size(); ++c)
    for (std::size_t k = 0; k < d; ++k) m(k, c) = vs[idx[c]][k];
  return m;
}

// Coefficients expressing target in the independent columns `idx`, if any.
inline std::optional<RationalVector> combination(const std::vector<RationalVector> &gens,
                                                 std::span<const std::size_t> idx,
                                                 const RationalVector &target) {
  RationalMatrix m = columns_of(gens, idx, target.size());
  if (rank(m) != idx.size()) return std::nullopt;
  return particular_solution(m, target);
}

} // namespace detail

/// Decides cone membership by enumerating linearly independent generator
/// subsets (Carathéodory) in order of size, then lexicographically. A
/// non-member gets a separating functional taken at a vertex of the pointed
/// polyhedron {y : <y,g_i> >= 0, <y,target> = -1, y in span(generators)}.
inline ConeQuery cone_membership(const std::vector<RationalVector> &generators,
                                 const RationalVector &target) {
  const std::size_t d = target.size();
  for (const auto &g : generators)
    if (g.size() != d)
      throw Error(ErrorCode::DimensionMismatch, "cone generator length differs from target");

  ConeQuery q{generators, target, false, {}, {}};
  const std::size_t n = generators.size();
  RationalMatrix gen_rows(n, d);
  RationalMatrix with_target(n + 1, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) with_target(i, k) = gen_rows(i, k) = generators[i][k];
  for (std::size_t k = 0; k < d; ++k) with_target(n, k) = target[k];
  const bool in_span = rank(gen_rows) == rank(with_target);

  const std::size_t max_size = in_span ? std::min(n, d) : 0;
  for (std::size_t s = 0; in_span && s <= max_size; ++s) {
    bool found = false;
    for_each_subset(n, s, [&](std::span<const std::size_t> idx) {
      auto x = detail::combination(generators, idx, target);
      if (!x) return true;
      for (const auto &xi : *x)
        if (xi < 0) return true;
      q.coefficients.assign(n, Rational(0));
      for (std::size_t i = 0; i < idx.size(); ++i) q.coefficients[idx[i]] = (*x)[i];
      found = true;
      return false;
    });
    if (found) {
      q.member = true;
      if (!q.certificate_valid())
        throw Error(ErrorCode::Internal, "invalid membership certificate");
      return q;
    }
  }

  // Not a member. W spans the orthogonal complement of span(generators).
  RationalMatrix w = right_nullspace(gen_rows); // d x (d - r), columns
  for (std::size_t j = 0; j < w.cols(); ++j) {
    Rational t = 0;
    for (std::size_t k = 0; k < d; ++k) t += w(k, j) * target[k];
    if (t != 0) {
      // Target leaves the span: the projection direction separates.
      q.functional.resize(d);
      for (std::size_t k = 0; k < d; ++k) q.functional[k] = t > 0 ? -w(k, j) : w(k, j);
      if (!q.certificate_valid())
        throw Error(ErrorCode::Internal, "invalid separating functional");
      return q;
    }
  }

  const std::size_t r = d - w.cols();
  bool found = false;
  for_each_subset(n, r == 0 ? 0 : r - 1, [&](std::span<const std::size_t> idx) {
    RationalMatrix sys(d, d);
    RationalVector rhs(d, Rational(0));
    std::size_t row = 0;
    for (std::size_t j = 0; j < w.cols(); ++j, ++row)
      for (std::size_t k = 0; k < d; ++k) sys(row, k) = w(k, j);
    for (std::size_t k = 0; k < d; ++k) sys(row, k) = target[k];
    rhs[row++] = -1;
    for (auto i : idx) {
      for (std::size_t k = 0; k < d; ++k) sys(row, k) = generators[i][k];
      ++row;
    }
    auto y = solve_square(sys, rhs);
    if (!y) return true;
    for (const auto &g : generators)
      if (dot(*y, g) < 0) return true;
    q.functional = std::move(*y);
    found = true;
    return false;
  });
  if (!found || !q.certificate_valid())
    throw Error(ErrorCode::Internal, "no separating functional found");
  return q;
}

} // namespace quadlag
