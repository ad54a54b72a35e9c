#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "quadlag/exact/linalg.hpp"

namespace quadlag {

struct HermiteForm {
  IntMatrix basis;     // the `rank` nonzero rows of the HNF
  IntMatrix transform; // unimodular, transform * input = full HNF (zero rows last)
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

struct SmithForm {
  IntVector diagonal; // min(rows, cols) entries, d_i | d_{i+1}, zeros last
  IntMatrix left;     // unimodular, rows x rows
  IntMatrix right;    // unimodular, cols x cols
};

namespace detail {

inline void add_row_multiple(IntMatrix &m, std::size_t dst, std::size_t src, const Integer &f) {
  if (f == 0) return;
  auto d = m.row(dst);
  auto s = m.row(src);
  for (std::size_t j = 0; j < d.size(); ++j) d[j] += f * s[j];
}

inline void add_column_multiple(IntMatrix &m, std::size_t dst, std::size_t src, const Integer &f) {
  if (f == 0) return;
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, dst) += f * m(i, src);
}

inline void negate_row(IntMatrix &m, std::size_t r) {
  for (auto &x : m.row(r)) x = -x;
}

inline Integer floor_div(const Integer &a, const Integer &b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Integer trunc_div(const Integer &a, const Integer &b) {
  Integer q;
  mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

} // namespace detail

/// Row-style Hermite normal form: upper echelon, positive pivots, entries
/// above a pivot reduced into [0, pivot).
inline HermiteForm hermite_normal_form(const IntMatrix &input) {
  using detail::add_row_multiple;
  IntMatrix h = input;
  IntMatrix u = IntMatrix::identity(input.rows());
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < h.cols() && r < h.rows(); ++c) {
    // Euclid on column c among rows r.. until one nonzero remains.
    for (;;) {
      std::optional<std::size_t> best;
      for (std::size_t i = r; i < h.rows(); ++i)
        if (h(i, c) != 0 && (!best || abs(h(i, c)) < abs(h(*best, c)))) best = i;
      if (!best) break;
      h.swap_rows(*best, r);
      u.swap_rows(*best, r);
      bool done = true;
      for (std::size_t i = r + 1; i < h.rows(); ++i) {
        if (h(i, c) == 0) continue;
        Integer q = detail::trunc_div(h(i, c), h(r, c));
        add_row_multiple(h, i, r, -q);
        add_row_multiple(u, i, r, -q);
        if (h(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) {
      detail::negate_row(h, r);
      detail::negate_row(u, r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      Integer q = detail::floor_div(h(i, c), h(r, c));
      add_row_multiple(h, i, r, -q);
      add_row_multiple(u, i, r, -q);
    }
    pivots.push_back(c);
    ++r;
  }
  HermiteForm out;
  out.rank = r;
  out.pivots = std::move(pivots);
  out.basis = IntMatrix(r, h.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) out.basis(i, j) = h(i, j);
  out.transform = std::move(u);
  return out;
}

inline SmithForm smith_normal_form(const IntMatrix &input) {
  using detail::add_column_multiple;
  using detail::add_row_multiple;
  IntMatrix a = input;
  IntMatrix left = IntMatrix::identity(a.rows());
  IntMatrix right = IntMatrix::identity(a.cols());
  const std::size_t n = std::min(a.rows(), a.cols());
  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      std::optional<std::pair<std::size_t, std::size_t>> best;
      for (std::size_t i = t; i < a.rows(); ++i)
        for (std::size_t j = t; j < a.cols(); ++j)
          if (a(i, j) != 0 && (!best || abs(a(i, j)) < abs(a(best->first, best->second))))
            best = {i, j};
      if (!best) break;
      a.swap_rows(best->first, t);
      left.swap_rows(best->first, t);
      a.swap_columns(best->second, t);
      right.swap_columns(best->second, t);

      bool clean = true;
      for (std::size_t i = t + 1; i < a.rows(); ++i) {
        if (a(i, t) == 0) continue;
        Integer q = detail::trunc_div(a(i, t), a(t, t));
        add_row_multiple(a, i, t, -q);
        add_row_multiple(left, i, t, -q);
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < a.cols(); ++j) {
        if (a(t, j) == 0) continue;
        Integer q = detail::trunc_div(a(t, j), a(t, t));
        add_column_multiple(a, j, t, -q);
        add_column_multiple(right, j, t, -q);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Divisibility: fold an offending row into row t and reduce again.
      std::optional<std::size_t> offending;
      for (std::size_t i = t + 1; i < a.rows() && !offending; ++i)
        for (std::size_t j = t + 1; j < a.cols(); ++j)
          if (!mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
            offending = i;
            break;
          }
      if (!offending) break;
      add_row_multiple(a, t, *offending, 1);
      add_row_multiple(left, t, *offending, 1);
    }
    if (a(t, t) < 0) {
      detail::negate_row(a, t);
      detail::negate_row(left, t);
    }
  }
  SmithForm out;
  out.diagonal.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.diagonal[i] = a(i, i);
  out.left = std::move(left);
  out.right = std::move(right);
  return out;
}

/// Coordinates of `v` with respect to an HNF basis (rows), over Q. nullopt when
/// v is outside the rational span.
inline std::optional<RationalVector> hnf_coordinates(const HermiteForm &h,
                                                     std::span<const Rational> v) {
  if (v.size() != h.basis.cols())
    throw Error(ErrorCode::DimensionMismatch, "vector length vs lattice ambient dimension");
  RationalVector rest(v.begin(), v.end());
  RationalVector coords(h.rank, Rational(0));
  for (std::size_t i = 0; i < h.rank; ++i) {
    const std::size_t pc = h.pivots[i];
    coords[i] = rest[pc] / Rational(h.basis(i, pc));
    if (coords[i] == 0) continue;
    for (std::size_t j = 0; j < rest.size(); ++j) rest[j] -= coords[i] * Rational(h.basis(i, j));
  }
  for (const auto &x : rest)
    if (x != 0) return std::nullopt;
  return coords;
}

/// Index of a sublattice: a positive count, or infinite when the ranks differ.
struct LatticeIndex {
  std::optional<Integer> value; // nullopt = infinite

  [[nodiscard]] bool is_infinite() const { return !value.has_value(); }
  [[nodiscard]] bool is_one() const { return value && *value == 1; }
  friend bool operator==(const LatticeIndex &, const LatticeIndex &) = default;
};

inline std::string to_string(const LatticeIndex &idx) {
  return idx.value ? idx.value->get_str() : std::string("infinite");
}

/// Coordinates of every `sub` row in the HNF basis of `ambient`; throws
/// NotASublattice when one is not an integral combination.
inline IntMatrix sublattice_coordinates(const IntMatrix &sub, const HermiteForm &ambient) {
  IntMatrix coords(sub.rows(), ambient.rank);
  for (std::size_t i = 0; i < sub.rows(); ++i) {
    RationalVector v(sub.row(i).begin(), sub.row(i).end());
    auto x = hnf_coordinates(ambient, v);
    if (!x)
      throw Error(ErrorCode::NotASublattice, "generator " + std::to_string(i) +
                                                 " lies outside the ambient span");
    for (std::size_t j = 0; j < ambient.rank; ++j) {
      if ((*x)[j].get_den() != 1)
        throw Error(ErrorCode::NotASublattice,
                    "generator " + std::to_string(i) + " is not an integral combination");
      coords(i, j) = (*x)[j].get_num();
    }
  }
  return coords;
}

inline LatticeIndex lattice_index(const IntMatrix &sub, const IntMatrix &ambient) {
  if (sub.cols() != ambient.cols() && sub.rows() != 0)
    throw Error(ErrorCode::DimensionMismatch, "generators of different lengths");
  HermiteForm amb = hermite_normal_form(ambient);
  IntMatrix coords = sublattice_coordinates(sub, amb);
  if (amb.rank == 0) return {Integer(1)};
  SmithForm s = smith_normal_form(coords);
  Integer index = 1;
  for (std::size_t i = 0; i < amb.rank; ++i) {
    if (i >= s.diagonal.size() || s.diagonal[i] == 0) return {std::nullopt};
    index *= s.diagonal[i];
  }
  return {index};
}

/// Rational generators: both sets are scaled by one common denominator first,
/// which leaves the index unchanged.
inline LatticeIndex lattice_index(const RationalMatrix &sub, const RationalMatrix &ambient) {
  Integer d = common_denominator(sub);
  mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), common_denominator(ambient).get_mpz_t());
  return lattice_index(scaled_to_integer(sub, d), scaled_to_integer(ambient, d));
}

} // namespace quadlag
