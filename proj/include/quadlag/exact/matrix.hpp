#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "quadlag/error.hpp"

namespace quadlag {

using Integer = mpz_class;
using Rational = mpq_class;

/// num/den in lowest terms. gmpxx leaves two-argument construction unreduced.
inline Rational make_rational(const Integer &num, const Integer &den) {
  if (den == 0) throw Error(ErrorCode::DimensionMismatch, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

using IntVector = std::vector<Integer>;
using RationalVector = std::vector<Rational>;

/// Dense row-major matrix with value semantics. Used with `Integer` and
/// `Rational` entries; gmpxx keeps every `Rational` canonical (reduced, positive
/// denominator) after each arithmetic operation.
template <class T> class Matrix {
public:
  using value_type = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto &row : init) {
      if (row.size() != cols_)
        throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix id(n, n);
    for (std::size_t i = 0; i < n; ++i) id(i, i) = 1;
    return id;
  }

  static Matrix from_rows(const std::vector<std::vector<T>> &rows,
                          std::size_t cols_if_empty = 0) {
    Matrix m(rows.size(), rows.empty() ? cols_if_empty : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_)
        throw Error(ErrorCode::DimensionMismatch, "ragged row list");
      std::copy(rows[i].begin(), rows[i].end(), m.row_begin(i));
    }
    return m;
  }

  static Matrix from_columns(const std::vector<std::vector<T>> &cols,
                             std::size_t rows_if_empty = 0) {
    Matrix m(cols.empty() ? rows_if_empty : cols.front().size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != m.rows_)
        throw Error(ErrorCode::DimensionMismatch, "ragged column list");
      for (std::size_t i = 0; i < m.rows_; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

  T &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T &operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  [[nodiscard]] std::span<T> row(std::size_t i) {
    return {data_.data() + i * cols_, cols_};
  }
  [[nodiscard]] std::span<const T> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  [[nodiscard]] std::vector<T> row_vector(std::size_t i) const {
    return {row_begin(i), row_begin(i) + static_cast<std::ptrdiff_t>(cols_)};
  }
  [[nodiscard]] std::vector<T> column(std::size_t j) const {
    std::vector<T> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  [[nodiscard]] Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Rows picked by `idx`, in the given order.
  [[nodiscard]] Matrix select_rows(std::span<const std::size_t> idx) const {
    Matrix out(idx.size(), cols_);
    for (std::size_t r = 0; r < idx.size(); ++r)
      std::copy(row_begin(idx[r]), row_begin(idx[r]) + cols_, out.row_begin(r));
    return out;
  }
  [[nodiscard]] Matrix select_columns(std::span<const std::size_t> idx) const {
    Matrix out(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t c = 0; c < idx.size(); ++c) out(i, c) = (*this)(i, idx[c]);
    return out;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap_ranges(row_begin(a), row_begin(a) + cols_, row_begin(b));
  }
  void swap_columns(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }

  [[nodiscard]] bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const T &x) { return x == 0; });
  }

  friend bool operator==(const Matrix &a, const Matrix &b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend Matrix operator*(const Matrix &a, const Matrix &b) {
    if (a.cols_ != b.rows_)
      throw Error(ErrorCode::DimensionMismatch, "matrix product shape");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T &aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend std::vector<T> operator*(const Matrix &a, const std::vector<T> &v) {
    if (a.cols_ != v.size())
      throw Error(ErrorCode::DimensionMismatch, "matrix-vector shape");
    std::vector<T> out(a.rows_, T(0));
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) out[i] += a(i, k) * v[k];
    return out;
  }

  friend std::ostream &operator<<(std::ostream &os, const Matrix &m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows_; ++i) {
      if (i) os << "; ";
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? " " : "") << m(i, j);
    }
    return os << ']';
  }

private:
  auto row_begin(std::size_t i) {
    return data_.begin() + static_cast<std::ptrdiff_t>(i * cols_);
  }
  auto row_begin(std::size_t i) const {
    return data_.begin() + static_cast<std::ptrdiff_t>(i * cols_);
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RationalMatrix = Matrix<Rational>;

inline RationalMatrix to_rational(const IntMatrix &m) {
  RationalMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Rational(m(i, j));
  return out;
}

inline RationalVector to_rational(const IntVector &v) {
  return {v.begin(), v.end()};
}

/// Least common multiple of all denominators (1 for an empty input).
inline Integer common_denominator(std::span<const Rational> values) {
  Integer l = 1;
  for (const auto &q : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  return l;
}

/// Multiplies by `scale`; throws if an entry does not become integral.
inline IntMatrix scaled_to_integer(const RationalMatrix &m, const Integer &scale) {
  IntMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Rational s = m(i, j) * scale;
      if (s.get_den() != 1)
        throw Error(ErrorCode::DimensionMismatch, "scale does not clear denominators");
      out(i, j) = s.get_num();
    }
  return out;
}

inline Integer common_denominator(const RationalMatrix &m) {
  Integer l = 1;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (const auto &q : m.row(i)) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  return l;
}

/// Scales a nonzero rational vector to the primitive integer vector on the same
/// ray with its first nonzero entry positive. The zero vector maps to zeros.
inline IntVector primitive_integer(std::span<const Rational> v) {
  Integer den = common_denominator(v);
  IntVector out(v.size());
  Integer g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rational s = v[i] * den;
    out[i] = s.get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out[i].get_mpz_t());
  }
  if (g == 0) return out;
  auto first = std::find_if(out.begin(), out.end(), [](const Integer &x) { return x != 0; });
  if (*first < 0) g = -g;
  for (auto &x : out) x /= g;
  return out;
}

inline Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "dot product length");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline std::string to_string(const Rational &q) { return q.get_str(); }

} // namespace quadlag
