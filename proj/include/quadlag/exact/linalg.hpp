#pragma once

#include <optional>
#include <vector>

#include "quadlag/exact/matrix.hpp"

namespace quadlag {

struct EchelonForm {
  RationalMatrix reduced;             // reduced row echelon form
  std::vector<std::size_t> pivots;    // pivot column of each nonzero row
  [[nodiscard]] std::size_t rank() const { return pivots.size(); }
};

/// Gauss-Jordan elimination over Q. Pivot choice is the first nonzero entry,
/// so the result depends only on the row space (RREF is unique).
inline EchelonForm row_reduce(RationalMatrix m) {
  EchelonForm out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(p, r);
    Rational inv = 1 / m(r, c);
    for (auto &x : m.row(r)) x *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

inline std::size_t rank(const RationalMatrix &m) { return row_reduce(m).rank(); }

/// Basis of {x : M x = 0} as the columns of the result, each a primitive
/// integer vector with positive leading entry (one per free column, in order).
inline RationalMatrix right_nullspace(const RationalMatrix &m) {
  EchelonForm e = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    RationalVector v(m.cols(), Rational(0));
    v[f] = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.reduced(i, f);
    basis.push_back(to_rational(primitive_integer(v)));
  }
  return RationalMatrix::from_columns(basis, m.cols());
}

/// Basis of {y : y M = 0} as the rows of the result, same normalization.
inline RationalMatrix left_nullspace(const RationalMatrix &m) {
  return right_nullspace(m.transpose()).transpose();
}

struct RankAndNullspaces {
  std::size_t rank = 0;
  RationalMatrix right_nullspace_basis; // columns
  RationalMatrix left_nullspace_basis;  // rows
};

inline RankAndNullspaces rank_and_nullspaces(const RationalMatrix &m) {
  return {rank(m), right_nullspace(m), left_nullspace(m)};
}

/// Some solution of M x = rhs: free variables set to zero, so the support lies in
/// the pivot columns of the RREF. nullopt when inconsistent.
inline std::optional<RationalVector> particular_solution(const RationalMatrix &m,
                                                         const RationalVector &rhs) {
  if (rhs.size() != m.rows())
    throw Error(ErrorCode::DimensionMismatch, "right-hand side length");
  RationalMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = rhs[i];
  }
  EchelonForm e = row_reduce(std::move(aug));
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  RationalVector x(m.cols(), Rational(0));
  for (std::size_t i = 0; i < e.pivots.size(); ++i) x[e.pivots[i]] = e.reduced(i, m.cols());
  return x;
}

/// Unique solution of a square nonsingular system, nullopt if singular.
inline std::optional<RationalVector> solve_square(const RationalMatrix &m,
                                                  const RationalVector &rhs) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::DimensionMismatch, "solve_square needs a square matrix");
  RationalMatrix a = m;
  RationalVector b = rhs;
  const std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) return std::nullopt;
    a.swap_rows(p, c);
    std::swap(b[p], b[c]);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a(i, c) == 0) continue;
      Rational f = a(i, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
      b[i] -= f * b[c];
    }
  }
  RationalVector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    Rational s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * x[j];
    x[ii] = s / a(ii, ii);
  }
  return x;
}

inline std::optional<RationalMatrix> inverse(const RationalMatrix &m) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::DimensionMismatch, "inverse needs a square matrix");
  const std::size_t n = m.rows();
  RationalMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  EchelonForm e = row_reduce(std::move(aug));
  if (e.rank() < n || (n > 0 && e.pivots[n - 1] != n - 1)) return std::nullopt;
  RationalMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  return inv;
}

/// Fraction-free (Bareiss) determinant.
inline Integer determinant(IntMatrix a) {
  if (a.rows() != a.cols())
    throw Error(ErrorCode::DimensionMismatch, "determinant needs a square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(p, k);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

/// True when `inner`'s rows lie in the row space of `outer`.
inline bool row_space_contains(const RationalMatrix &outer, const RationalMatrix &inner) {
  if (inner.rows() == 0) return true;
  if (outer.cols() != inner.cols())
    throw Error(ErrorCode::DimensionMismatch, "row spaces of different widths");
  RationalMatrix stacked(outer.rows() + inner.rows(), outer.cols());
  for (std::size_t i = 0; i < outer.rows(); ++i)
    for (std::size_t j = 0; j < outer.cols(); ++j) stacked(i, j) = outer(i, j);
  for (std::size_t i = 0; i < inner.rows(); ++i)
    for (std::size_t j = 0; j < inner.cols(); ++j) stacked(outer.rows() + i, j) = inner(i, j);
  return rank(stacked) == rank(outer);
}

} // namespace quadlag
