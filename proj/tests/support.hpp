#pragma once

#include <quadlag/exact/matrix.hpp>
#include <quadlag/polytope.hpp>
#include <quadlag/quadrics.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qtest {

using quadlag::Integer;
using quadlag::IntMatrix;
using quadlag::Rational;
using quadlag::RationalMatrix;
using quadlag::RationalVector;

inline Rational q(const std::string &s) { return Rational(s); }

inline RationalMatrix rmat(const std::vector<std::vector<long>> &rows) {
  RationalMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

inline IntMatrix imat(const std::vector<std::vector<long>> &rows) {
  IntMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

inline RationalVector rvec(const std::vector<long> &v) { return {v.begin(), v.end()}; }

// Laplace expansion along the first row; oracle for small sizes only.
inline Integer cofactor_det(const IntMatrix &m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  Integer total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (m(0, j) == 0) continue;
    IntMatrix minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(r - 1, cc++) = m(r, c);
    Integer term = m(0, j) * cofactor_det(minor);
    total += (j % 2 == 0) ? term : Integer(-term);
  }
  return total;
}

inline quadlag::PolytopePresentation pentagon() {
  return {rmat({{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {-1, -1}}), rvec({0, 0, 2, 2, 3})};
}

inline quadlag::PolytopePresentation square() {
  return {rmat({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}), rvec({0, 0, 1, 1})};
}

inline quadlag::PolytopePresentation simplex2() {
  return {rmat({{1, 0}, {0, 1}, {-1, -1}}), rvec({0, 0, 1})};
}

// Columns: k copies of (2,1), p-k of (1,2), q of (1,-1); c = (3,0).
inline quadlag::QuadricSystem scaled_two_quadrics(std::size_t k, std::size_t p, std::size_t q) {
  RationalMatrix g(2, p + q);
  for (std::size_t i = 0; i < p + q; ++i) {
    g(0, i) = i < k ? 2 : 1;
    g(1, i) = i < k ? 1 : (i < p ? 2 : -1);
  }
  return {g, rvec({3, 0})};
}

// Columns: k copies of (1,1), p-k of (1,0), q of (0,1); c = (1,2).
inline quadlag::QuadricSystem unit_two_quadrics(std::size_t k, std::size_t p, std::size_t q) {
  RationalMatrix g(2, p + q);
  for (std::size_t i = 0; i < p + q; ++i) {
    g(0, i) = i < p ? 1 : 0;
    g(1, i) = (i < k || i >= p) ? 1 : 0;
  }
  return {g, rvec({1, 2})};
}

template <class F> std::optional<quadlag::ErrorCode> error_code_of(F &&f) {
  try {
    f();
  } catch (const quadlag::Error &e) {
    return e.code();
  }
  return std::nullopt;
}

} // namespace qtest

namespace quadlag {

inline void PrintTo(const QuadricSystem &s, std::ostream *os) { *os << "Gamma=" << s.gamma() << " c=" << RationalMatrix::from_rows({s.c()}); }

} // namespace quadlag
