#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quadlag/exact/normal_form.hpp"
#include "quadlag/polytope.hpp"
#include "quadlag/quadrics.hpp"

namespace quadlag {

/// A lattice in Q^d given by an HNF basis of integer rows divided by `scale`.
struct LatticeBasis {
  IntMatrix basis;
  Integer scale = 1;
  std::size_t rank = 0;
  std::size_t ambient_dimension = 0;
  friend bool operator==(const LatticeBasis &, const LatticeBasis &) = default;
};

struct SublatticeComparison {
  IndexSet index_set; // the excluded indices I
  LatticeBasis sub;
  bool equal_to_full = false;
  LatticeIndex index;
};

/// Invariant factors d_1 | d_2 | ... with the 1s dropped; empty means trivial.
struct FiniteAbelianGroup {
  IntVector invariant_factors;

  [[nodiscard]] Integer order() const {
    Integer o = 1;
    for (const auto &d : invariant_factors) o *= d;
    return o;
  }
  [[nodiscard]] bool trivial() const { return invariant_factors.empty(); }
  friend bool operator==(const FiniteAbelianGroup &, const FiniteAbelianGroup &) = default;
};

inline std::string to_string(const FiniteAbelianGroup &g) {
  if (g.trivial()) return "0";
  std::string s;
  for (std::size_t i = 0; i < g.invariant_factors.size(); ++i)
    s += (i ? " x Z/" : "Z/") + g.invariant_factors[i].get_str();
  return s;
}

enum class EmbeddingMethod { QuadricSide, PolytopeSide, Both };

inline std::string_view to_string(EmbeddingMethod m) {
  switch (m) {
  case EmbeddingMethod::QuadricSide: return "quadric-side";
  case EmbeddingMethod::PolytopeSide: return "polytope-side";
  case EmbeddingMethod::Both: return "both";
  }
  return "unknown";
}

struct EmbeddingWitness {
  IndexSet index_set;                 // vertex active set where the check failed
  std::optional<RationalVector> vertex; // the vertex itself, polytope side
  LatticeIndex index;                 // [L : L_I] or |det| of the active normals in Lambda
  friend bool operator==(const EmbeddingWitness &, const EmbeddingWitness &) = default;
};

struct EmbeddingVerdict {
  bool embeds = false;
  EmbeddingMethod method = EmbeddingMethod::QuadricSide;
  std::optional<EmbeddingWitness> witness;
  friend bool operator==(const EmbeddingVerdict &, const EmbeddingVerdict &) = default;
};

/// phi in (1/2)L* / L* and the signs eps_k(phi) = exp(2 pi i <gamma_k, phi>).
struct SignAction {
  RationalVector phi;
  std::vector<int> signs;
  friend bool operator==(const SignAction &, const SignAction &) = default;
};

struct DGroup {
  FiniteAbelianGroup group;
  std::vector<SignAction> elements; // element t has coordinates bit j of t, j = 0..r-1
};

inline LatticeBasis lattice_basis(const std::vector<RationalVector> &generators, std::size_t dim,
                                  const Integer &scale) {
  RationalMatrix rows = RationalMatrix::from_rows(generators, dim);
  HermiteForm h = hermite_normal_form(scaled_to_integer(rows, scale));
  return {h.basis, scale, h.rank, dim};
}

namespace detail {

inline Integer gamma_scale(const QuadricSystem &s) { return common_denominator(s.gamma()); }

inline IntMatrix scaled_columns(const QuadricSystem &s, const IndexSet &keep) {
  return scaled_to_integer(s.gamma().select_columns(keep).transpose(), gamma_scale(s));
}

inline IndexSet all_indices(std::size_t m) { return complement({}, m); }

} // namespace detail

/// L = Z<gamma_1, ..., gamma_m>.
inline LatticeBasis column_lattice(const QuadricSystem &s) {
  return lattice_basis(s.columns(), s.quadrics(), detail::gamma_scale(s));
}

/// L_I = Z<gamma_i : i not in I> compared with L.
inline SublatticeComparison sublattice(const QuadricSystem &s, const IndexSet &excluded) {
  for (auto i : excluded)
    if (i >= s.m()) throw Error(ErrorCode::DimensionMismatch, "index outside 1..m");
  const IndexSet keep = complement(excluded, s.m());
  std::vector<RationalVector> gens;
  for (auto k : keep) gens.push_back(s.column(k));
  SublatticeComparison out;
  out.index_set = excluded;
  out.sub = lattice_basis(gens, s.quadrics(), detail::gamma_scale(s));
  out.index = lattice_index(detail::scaled_columns(s, keep),
                            detail::scaled_columns(s, detail::all_indices(s.m())));
  out.equal_to_full = out.index.is_one();
  return out;
}

/// N embeds iff L_I = L for every zero set I of a point of R. Zero sets are
/// the face active sets of P; L_I only shrinks as I grows, so the vertex
/// active sets suffice. First failure in lexicographic order is the witness.
inline EmbeddingVerdict embedding_criterion_quadrics(const QuadricSystem &s) {
  const PolytopePresentation p = to_polytope(s);
  EmbeddingVerdict v;
  v.method = EmbeddingMethod::QuadricSide;
  v.embeds = true;
  for (const auto &I : vertex_active_sets(p)) {
    auto cmp = sublattice(s, I);
    if (!cmp.equal_to_full) {
      v.embeds = false;
      v.witness = EmbeddingWitness{I, std::nullopt, cmp.index};
      break;
    }
  }
  return v;
}

/// Lambda = Z<a_1, ..., a_m>; P is Delzant iff at each vertex the active
/// normals form a basis of Lambda, i.e. their coordinate matrix in an HNF basis
/// of Lambda has determinant +-1. Every face of a pointed polyhedron contains a
/// vertex, so vertices suffice.
inline EmbeddingVerdict delzant_check(const PolytopePresentation &p) {
  if (!check_generic(p).generic)
    throw Error(ErrorCode::NonGenericPresentation, "presentation is not generic");
  const Integer scale = common_denominator(p.a());
  const IntMatrix normals = scaled_to_integer(p.a(), scale);
  const HermiteForm lambda = hermite_normal_form(normals);

  EmbeddingVerdict v;
  v.method = EmbeddingMethod::PolytopeSide;
  v.embeds = true;
  for (const auto &vertex : enumerate_vertices(p)) {
    const IntMatrix coords = sublattice_coordinates(normals.select_rows(vertex.active_set), lambda);
    if (coords.rows() != coords.cols())
      throw Error(ErrorCode::Internal, "vertex of a generic presentation is not simple");
    const Integer det = abs(determinant(coords));
    if (det != 1) {
      v.embeds = false;
      v.witness = EmbeddingWitness{vertex.active_set, vertex.point, {det}};
      break;
    }
  }
  return v;
}

/// Isotropy of a point with zero set I: L*_I / L*, isomorphic to L / L_I.
inline FiniteAbelianGroup isotropy_group(const QuadricSystem &s, const IndexSet &excluded) {
  for (auto i : excluded)
    if (i >= s.m()) throw Error(ErrorCode::DimensionMismatch, "index outside 1..m");
  const IntMatrix full = detail::scaled_columns(s, detail::all_indices(s.m()));
  const HermiteForm l = hermite_normal_form(full);
  if (l.rank < s.quadrics())
    throw Error(ErrorCode::NotFullRank, "L has rank below m-n");
  const IntMatrix coords = sublattice_coordinates(detail::scaled_columns(s, complement(excluded, s.m())), l);
  if (coords.rows() < l.rank || rank(to_rational(coords)) < l.rank)
    throw Error(ErrorCode::NotFullRank, "L_I has rank below m-n; I is not a zero set");
  const SmithForm snf = smith_normal_form(coords);
  FiniteAbelianGroup g;
  for (std::size_t i = 0; i < l.rank; ++i)
    if (snf.diagonal[i] != 1) g.invariant_factors.push_back(snf.diagonal[i]);
  return g;
}

/// D = (1/2)L*/L*, one element per s in {0,1}^(m-n): phi = (1/2) sum s_j b_j*
/// for the dual of the HNF basis b_j of L, so eps_k = (-1)^(s . coords(gamma_k)).
inline DGroup d_group(const QuadricSystem &s) {
  require_nondegenerate(s);
  const std::size_t r = s.quadrics();
  const Integer scale = detail::gamma_scale(s);
  const IntMatrix full = detail::scaled_columns(s, detail::all_indices(s.m()));
  const HermiteForm l = hermite_normal_form(full);
  if (l.rank != r) throw Error(ErrorCode::NotFullRank, "L has rank below m-n");
  const IntMatrix coords = sublattice_coordinates(full, l); // m x r

  RationalMatrix basis = to_rational(l.basis);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) basis(i, j) /= scale;
  const RationalMatrix dual = *inverse(basis); // columns are the dual basis

  DGroup out;
  out.group.invariant_factors.assign(r, Integer(2));
  for (std::size_t t = 0; t < (std::size_t{1} << r); ++t) {
    SignAction a;
    a.phi.assign(r, Rational(0));
    for (std::size_t j = 0; j < r; ++j)
      if (t >> j & 1U)
        for (std::size_t i = 0; i < r; ++i) a.phi[i] += dual(i, j) / 2;
    for (std::size_t k = 0; k < s.m(); ++k) {
      Integer e = 0;
      for (std::size_t j = 0; j < r; ++j)
        if (t >> j & 1U) e += coords(k, j);
      a.signs.push_back(mpz_even_p(e.get_mpz_t()) ? 1 : -1);
    }
    out.elements.push_back(std::move(a));
  }
  return out;
}

/// phi fixes a point of R iff some u in R vanishes outside {k : eps_k = +1},
/// i.e. c lies in the cone of those columns.
inline bool has_fixed_point(const QuadricSystem &s, const SignAction &a) {
  IndexSet plus;
  for (std::size_t k = 0; k < s.m(); ++k)
    if (a.signs[k] == 1) plus.push_back(k);
  if (plus.empty())
    return std::all_of(s.c().begin(), s.c().end(), [](const Rational &x) { return x == 0; });
  std::vector<RationalVector> gens;
  for (auto k : plus) gens.push_back(s.column(k));
  return cone_membership(gens, s.c()).member;
}

/// Free action of D on R: no nonzero element has a fixed point.
inline bool d_action_free(const QuadricSystem &s) {
  const DGroup d = d_group(s);
  for (std::size_t t = 1; t < d.elements.size(); ++t)
    if (has_fixed_point(s, d.elements[t])) return false;
  return true;
}

} // namespace quadlag
