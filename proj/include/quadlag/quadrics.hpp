#pragma once

#include <optional>
#include <vector>

#include "quadlag/exact/cone.hpp"
#include "quadlag/exact/linalg.hpp"
#include "quadlag/subsets.hpp"

namespace quadlag {

/// The system  sum_k gamma(j,k) u_k^2 = c_j,  j = 1..m-n.  Column k of `gamma`
/// is the vector gamma_k.
class QuadricSystem {
public:
  QuadricSystem(RationalMatrix gamma, RationalVector c)
      : gamma_(std::move(gamma)), c_(std::move(c)) {
    if (gamma_.cols() < 1)
      throw Error(ErrorCode::DimensionMismatch, "a quadric system needs m >= 1 variables");
    if (gamma_.rows() < 1 || gamma_.rows() > gamma_.cols())
      throw Error(ErrorCode::DimensionMismatch, "need 1 <= m-n <= m quadrics");
    if (c_.size() != gamma_.rows())
      throw Error(ErrorCode::DimensionMismatch, "right-hand side length differs from quadric count");
  }

  [[nodiscard]] const RationalMatrix &gamma() const noexcept { return gamma_; }
  [[nodiscard]] const RationalVector &c() const noexcept { return c_; }
  [[nodiscard]] std::size_t m() const noexcept { return gamma_.cols(); }
  [[nodiscard]] std::size_t quadrics() const noexcept { return gamma_.rows(); }
  [[nodiscard]] std::size_t n() const noexcept { return m() - quadrics(); }

  [[nodiscard]] RationalVector column(std::size_t k) const { return gamma_.column(k); }
  [[nodiscard]] std::vector<RationalVector> columns() const {
    std::vector<RationalVector> out;
    out.reserve(m());
    for (std::size_t k = 0; k < m(); ++k) out.push_back(column(k));
    return out;
  }

  /// Keeps only the listed columns (variables).
  [[nodiscard]] QuadricSystem restricted_to(const IndexSet &support) const {
    return {gamma_.select_columns(support), c_};
  }

  friend bool operator==(const QuadricSystem &, const QuadricSystem &) = default;

private:
  RationalMatrix gamma_;
  RationalVector c_;
};

struct NondegeneracyReport {
  bool nonempty_nondegenerate = false;
  std::optional<IndexSet> violating_subset;
  bool c_in_full_cone = false;
  bool minimal_candidate = false;

  friend bool operator==(const NondegeneracyReport &, const NondegeneracyReport &) = default;
};

struct CanonicalBoundedForm {
  QuadricSystem system;
  RationalMatrix transform;
};

inline bool sum_of_columns_is_zero(const QuadricSystem &s) {
  for (std::size_t j = 0; j < s.quadrics(); ++j) {
    Rational sum = 0;
    for (std::size_t k = 0; k < s.m(); ++k) sum += s.gamma()(j, k);
    if (sum != 0) return false;
  }
  return true;
}

/// Nonemptiness (c in the cone of all gamma_k) and nondegeneracy (c in no cone
/// spanned by fewer than m-n of them). Only subsets of size exactly m-n-1 are
/// tested: a smaller violating subset extends to one of that size. The witness
/// is the support of the membership certificate of the lexicographically
/// first violating subset.
inline NondegeneracyReport validate(const QuadricSystem &s) {
  NondegeneracyReport rep;
  rep.minimal_candidate = sum_of_columns_is_zero(s);
  const auto cols = s.columns();
  rep.c_in_full_cone = cone_membership(cols, s.c()).member;

  const std::size_t k = s.quadrics() - 1;
  for_each_subset(s.m(), k, [&](std::span<const std::size_t> idx) {
    std::vector<RationalVector> gens;
    for (auto i : idx) gens.push_back(cols[i]);
    ConeQuery q = cone_membership(gens, s.c());
    if (!q.member) return true;
    IndexSet witness;
    for (std::size_t i = 0; i < idx.size(); ++i)
      if (q.coefficients[i] != 0) witness.push_back(idx[i]);
    rep.violating_subset = std::move(witness);
    return false;
  });
  rep.nonempty_nondegenerate = rep.c_in_full_cone && !rep.violating_subset;
  return rep;
}

inline void require_nondegenerate(const QuadricSystem &s) {
  // Pipelines check the same system many times in a row.
  thread_local std::optional<QuadricSystem> last_ok;
  if (last_ok && *last_ok == s) return;
  auto rep = validate(s);
  if (rep.nonempty_nondegenerate) last_ok = s;
  if (!rep.nonempty_nondegenerate)
    throw Error(ErrorCode::DegenerateSystem,
                rep.c_in_full_cone ? "c lies in a cone of fewer than m-n columns"
                                   : "c is outside the cone of the columns (empty system)");
}

namespace detail {

// A row combination mu with <mu, gamma_k> > 0 for all k, if one exists
// (Gordan alternative: otherwise 0 is a convex combination of the columns).
inline std::optional<RationalVector> positive_row_combination(const QuadricSystem &s) {
  for (std::size_t j = 0; j < s.quadrics(); ++j) {
    bool positive = true;
    for (std::size_t k = 0; k < s.m() && positive; ++k) positive = s.gamma()(j, k) > 0;
    if (positive) {
      RationalVector e(s.quadrics(), Rational(0));
      e[j] = 1;
      return e;
    }
  }
  // (0,...,0,1) in cone{(gamma_k, 1)}  <=>  some y >= 0, sum y = 1, Gamma y = 0.
  const std::size_t d = s.quadrics() + 1;
  std::vector<RationalVector> gens;
  for (std::size_t k = 0; k < s.m(); ++k) {
    RationalVector g = s.column(k);
    g.push_back(1);
    gens.push_back(std::move(g));
  }
  RationalVector target(d, Rational(0));
  target.back() = 1;
  ConeQuery q = cone_membership(gens, target);
  if (q.member) return std::nullopt;
  // Separating (mu, t): <mu, gamma_k> + t >= 0 and t < 0, so <mu, gamma_k> > 0.
  RationalVector mu(q.functional.begin(), q.functional.end() - 1);
  IntVector prim = primitive_integer(mu);
  // primitive_integer fixes the sign of the first entry; keep the orientation.
  if (dot(to_rational(prim), mu) < 0)
    for (auto &x : prim) x = -x;
  return to_rational(prim);
}

} // namespace detail

/// Bounded iff the plane {Gamma y = 0} meets the nonnegative orthant only at 0.
inline bool is_bounded(const QuadricSystem &s) {
  require_nondegenerate(s);
  return detail::positive_row_combination(s).has_value();
}

inline QuadricSystem apply_equivalence(const QuadricSystem &s, const RationalMatrix &g) {
  if (g.rows() != s.quadrics() || g.cols() != s.quadrics())
    throw Error(ErrorCode::SingularTransform, "transform must be (m-n)x(m-n)");
  if (!inverse(g))
    throw Error(ErrorCode::SingularTransform, "transform is not invertible");
  return {g * s.gamma(), g * s.c()};
}

/// First row strictly positive, c = (c_1, 0, ..., 0) with c_1 > 0. If a row of
/// the input is already positive the first such row is used as is.
inline CanonicalBoundedForm canonicalize_bounded(const QuadricSystem &s) {
  require_nondegenerate(s);
  auto mu = detail::positive_row_combination(s);
  if (!mu) throw Error(ErrorCode::Unbounded, "no strictly positive row combination exists");

  const std::size_t r = s.quadrics();
  const Rational c1 = dot(*mu, s.c());
  if (c1 <= 0) throw Error(ErrorCode::Internal, "positive row gives nonpositive c_1");

  RationalMatrix t(r, r);
  for (std::size_t k = 0; k < r; ++k) t(0, k) = (*mu)[k];
  std::size_t lead = 0;
  while ((*mu)[lead] == 0) ++lead;
  std::size_t row = 1;
  for (std::size_t j = 0; j < r; ++j) {
    if (j == lead) continue;
    // e_j - (c_j / c_1) mu: kills the right-hand side, keeps t invertible.
    const Rational f = s.c()[j] / c1;
    for (std::size_t k = 0; k < r; ++k) t(row, k) = (k == j ? Rational(1) : Rational(0)) - f * (*mu)[k];
    ++row;
  }
  return {apply_equivalence(s, t), t};
}

} // namespace quadlag
