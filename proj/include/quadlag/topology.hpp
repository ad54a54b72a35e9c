#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quadlag/lattice_torus.hpp"

namespace quadlag {

enum class RKind { Points, Sphere, SphereProduct, Surface, SurfaceUnion, Unclassified };
enum class NKind { Circle, Torus, SphereTimesCircle, KleinBottle, Nkpq, SurfaceBundle, Unclassified };

inline std::string_view to_string(RKind k) {
  switch (k) {
  case RKind::Points: return "points";
  case RKind::Sphere: return "sphere";
  case RKind::SphereProduct: return "sphere-product";
  case RKind::Surface: return "surface";
  case RKind::SurfaceUnion: return "surface-union";
  case RKind::Unclassified: return "unclassified";
  }
  return "unknown";
}

inline std::string_view to_string(NKind k) {
  switch (k) {
  case NKind::Circle: return "circle";
  case NKind::Torus: return "torus";
  case NKind::SphereTimesCircle: return "sphere-times-circle";
  case NKind::KleinBottle: return "klein-bottle";
  case NKind::Nkpq: return "N_k(p,q)";
  case NKind::SurfaceBundle: return "surface-bundle";
  case NKind::Unclassified: return "unclassified";
  }
  return "unknown";
}

struct NTriple {
  std::size_t k = 0, p = 0, q = 0;
  friend bool operator==(const NTriple &, const NTriple &) = default;
};

/// Two quadrics in canonical form: p positive and q negative entries in the second
/// canonical row, oriented so that p >= q (ties: coordinate 1 counts as positive).
struct TwoQuadricForm {
  std::size_t p = 0, q = 0;
  std::vector<std::size_t> permutation; // positives first, then negatives, each ascending
  bool free_combinatorial = false;      // no element with +1 on both blocks
  bool free_brute_force = false;        // no element fixes a point of R
  std::optional<int> sign_case;        // 1: the matched pair is -1 on the negative block
  std::optional<NTriple> triple;        // normalized (k, p, q) of N_k(p,q)
  friend bool operator==(const TwoQuadricForm &, const TwoQuadricForm &) = default;
};

struct SurfaceGenus {
  std::size_t m_effective = 0;
  std::uint64_t genus = 0;
  std::uint64_t components = 1;
  friend bool operator==(const SurfaceGenus &, const SurfaceGenus &) = default;
};

struct Fibration {
  std::string total, base, fiber, kind;
  friend bool operator==(const Fibration &, const Fibration &) = default;
};

struct PolytopeSummary {
  std::size_t m = 0, n = 0, vertices = 0, facets = 0;
  IndexSet redundant;
  friend bool operator==(const PolytopeSummary &, const PolytopeSummary &) = default;
};

struct TopologyReport {
  std::size_t m = 0, n = 0;
  RKind r_kind = RKind::Unclassified;
  std::string r_topology;
  NKind n_kind = NKind::Unclassified;
  std::string n_topology;
  std::optional<std::string> z_note;
  std::vector<Fibration> fibrations;
  bool embeds = false;
  bool immersion_only = false;
  bool minimal_candidate = false;
  bool d_free = false;
  std::optional<std::uint64_t> genus;
  std::optional<TwoQuadricForm> two_quadrics;
  std::optional<SurfaceGenus> surface;
  std::vector<RationalVector> gale_vectors;
  std::optional<PolytopeSummary> summary;
  std::vector<std::string> notes;
  friend bool operator==(const TopologyReport &, const TopologyReport &) = default;
};

namespace detail {

inline std::string sphere(std::size_t d) { return "S^" + std::to_string(d); }

inline std::string torus(std::size_t d) { return d == 1 ? "S^1" : "T^" + std::to_string(d); }

/// N(m) of the equal-coefficient one-quadric family.
inline std::string n_of(std::size_t m) {
  if (m == 1) return "S^1";
  return m % 2 == 0 ? sphere(m - 1) + " x S^1" : "K^" + std::to_string(m);
}

inline std::uint64_t pow2(std::size_t e) { return std::uint64_t{1} << e; }

inline TopologyReport base_report(const QuadricSystem &s) {
  TopologyReport r;
  r.m = s.m();
  r.n = s.n();
  r.minimal_candidate = sum_of_columns_is_zero(s);
  r.embeds = embedding_criterion_quadrics(s).embeds;
  r.d_free = d_action_free(s);
  return r;
}

inline void add_fibrations(TopologyReport &r) {
  const std::size_t k = r.m - r.n;
  r.fibrations.push_back({"N", torus(k), r.r_topology, "fibre bundle"});
  if (r.embeds)
    r.fibrations.push_back({"N", "R/D (" + std::to_string(r.n) + "-dimensional small cover)", torus(k),
                            "principal " + torus(k) + "-bundle"});
}

inline void require_bounded(const QuadricSystem &s) {
  require_nondegenerate(s);
  if (!is_bounded(s)) throw Error(ErrorCode::Unbounded, "classification needs a compact R");
}

} // namespace detail

/// R = S^(m-1); N = S^(m-1) x_{Z/2} S^1 with the generator acting by
/// tau = diag(eps) on the sphere, so N is S^(m-1) x S^1 when det(tau) = 1 and
/// K^m otherwise. Equal gammas are exactly the embedding case, tau antipodal.
inline TopologyReport classify_one_quadric(const QuadricSystem &s) {
  if (s.quadrics() != 1) throw Error(ErrorCode::WrongQuadricCount, "expected one quadric");
  detail::require_bounded(s);
  TopologyReport r = detail::base_report(s);
  const std::size_t m = s.m();
  r.r_kind = m == 1 ? RKind::Points : RKind::Sphere;
  r.r_topology = detail::sphere(m - 1);

  const DGroup d = d_group(s);
  int det = 1;
  for (int e : d.elements[1].signs) det *= e;
  r.immersion_only = !r.embeds;
  if (m == 1) {
    r.n_kind = NKind::Circle;
    r.n_topology = "S^1";
  } else if (det == 1) {
    r.n_kind = NKind::SphereTimesCircle;
    r.n_topology = detail::sphere(m - 1) + " x S^1";
  } else {
    r.n_kind = NKind::KleinBottle;
    r.n_topology = "K^" + std::to_string(m);
  }
  if (r.immersion_only) {
    r.n_topology += " (immersed)";
    r.notes.push_back(std::string("involution on the sphere ") +
                      (det == 1 ? "preserves" : "reverses") + " orientation");
  }
  detail::add_fibrations(r);
  return r;
}

namespace detail {

// Case-(1) matchings with the pair of elements that are -1 on all of `other`;
// k is the number of +1 entries of the first element on `block`.
inline void collect_matchings(const DGroup &d, const IndexSet &block, const IndexSet &other,
                              std::vector<NTriple> &out) {
  std::vector<const SignAction *> minus_on_other;
  for (std::size_t t = 1; t < d.elements.size(); ++t) {
    bool all_minus = true;
    for (auto i : other) all_minus = all_minus && d.elements[t].signs[i] == -1;
    if (all_minus) minus_on_other.push_back(&d.elements[t]);
  }
  if (minus_on_other.size() < 2) return;
  for (const auto *e : minus_on_other) {
    std::size_t k = 0;
    for (auto i : block) k += e->signs[i] == 1;
    out.push_back({k, block.size(), other.size()});
  }
}

} // namespace detail

/// R = S^(p-1) x S^(q-1). D acts freely iff no element is +1 somewhere on
/// both blocks; when N embeds, the sign table is matched to the two standard
/// forms and reported as N_k(p,q), preferring p >= q, then the smallest k.
inline TopologyReport classify_two_quadrics(const QuadricSystem &s) {
  if (s.quadrics() != 2) throw Error(ErrorCode::WrongQuadricCount, "expected two quadrics");
  detail::require_bounded(s);
  TopologyReport r = detail::base_report(s);
  const CanonicalBoundedForm f = canonicalize_bounded(s);

  IndexSet pos, neg;
  for (std::size_t k = 0; k < s.m(); ++k) {
    const Rational &g = f.system.gamma()(1, k);
    if (g == 0) throw Error(ErrorCode::Internal, "zero entry in the second canonical row");
    (g > 0 ? pos : neg).push_back(k);
  }
  if (neg.size() > pos.size() || (neg.size() == pos.size() && neg.front() == 0)) std::swap(pos, neg);

  TwoQuadricForm form;
  form.p = pos.size();
  form.q = neg.size();
  form.permutation = pos;
  form.permutation.insert(form.permutation.end(), neg.begin(), neg.end());

  const DGroup d = d_group(s);
  form.free_combinatorial = true;
  form.free_brute_force = true;
  for (std::size_t t = 1; t < d.elements.size(); ++t) {
    const auto &e = d.elements[t];
    bool plus_p = false, plus_q = false;
    for (auto i : pos) plus_p = plus_p || e.signs[i] == 1;
    for (auto i : neg) plus_q = plus_q || e.signs[i] == 1;
    if (plus_p && plus_q) form.free_combinatorial = false;
    if (has_fixed_point(s, e)) form.free_brute_force = false;
  }

  r.r_kind = RKind::SphereProduct;
  r.r_topology = detail::sphere(form.p - 1) + " x " + detail::sphere(form.q - 1);

  if (r.embeds && form.free_combinatorial) {
    std::vector<NTriple> candidates;
    detail::collect_matchings(d, pos, neg, candidates);
    const std::size_t case_one = candidates.size();
    detail::collect_matchings(d, neg, pos, candidates);
    if (candidates.empty()) throw Error(ErrorCode::Internal, "free action matched no standard form");
    std::optional<std::size_t> best;
    auto better = [](const NTriple &a, const NTriple &b) {
      const bool ao = a.p >= a.q, bo = b.p >= b.q;
      if (ao != bo) return ao;
      if (a.k != b.k) return a.k < b.k;
      return a.p > b.p;
    };
    for (std::size_t i = 0; i < candidates.size(); ++i)
      if (!best || better(candidates[i], candidates[*best])) best = i;
    form.triple = candidates[*best];
    form.sign_case = *best < case_one ? 1 : 2;

    const NTriple &t = *form.triple;
    r.n_kind = NKind::Nkpq;
    r.n_topology = "N_" + std::to_string(t.k) + "(" + std::to_string(t.p) + "," + std::to_string(t.q) + ")";
    if (t.k == 0)
      r.n_topology += " = N(" + std::to_string(t.p) + ") x N(" + std::to_string(t.q) + ") = " +
                      detail::n_of(t.p) + " x " + detail::n_of(t.q);
    if (s.m() == 2) r.n_topology += " = T^2 (Clifford torus)";
    r.fibrations.push_back({r.n_topology, "N(" + std::to_string(t.q) + ") = " + detail::n_of(t.q),
                            "N(" + std::to_string(t.p) + ") = " + detail::n_of(t.p), "fibre bundle"});
  } else {
    r.n_kind = NKind::Unclassified;
    r.n_topology = r.embeds ? "unclassified" : "unclassified (immersion only)";
  }
  r.two_quadrics = form;
  detail::add_fibrations(r);
  return r;
}

/// R of a polygon with j strictly redundant inequalities is 2^j copies of the
/// surface of genus 1 + 2^(m'-3)(m'-4), m' = m - j.
inline SurfaceGenus polygon_genus(std::size_t m_effective, std::size_t redundant) {
  if (m_effective < 3) throw Error(ErrorCode::NotAPolygon, "a polygon needs at least 3 edges");
  SurfaceGenus g;
  g.m_effective = m_effective;
  g.components = detail::pow2(redundant);
  if (m_effective == 3) g.genus = 0;
  else g.genus = 1 + detail::pow2(m_effective - 3) * (m_effective - 4);
  return g;
}

inline PolytopeSummary summarize(const PolytopePresentation &p) {
  PolytopeSummary out;
  out.m = p.m();
  out.n = p.n();
  const auto rep = check_generic(p);
  out.vertices = enumerate_vertices(p).size();
  out.redundant = rep.redundant_strict;
  out.redundant.insert(out.redundant.end(), rep.redundant_touching.begin(), rep.redundant_touching.end());
  std::sort(out.redundant.begin(), out.redundant.end());
  out.facets = p.m() - out.redundant.size();
  return out;
}

inline TopologyReport classify_polygon(const QuadricSystem &s) {
  if (s.n() != 2) throw Error(ErrorCode::NotAPolygon, "n must be 2");
  detail::require_bounded(s);
  const PolytopePresentation p = to_polytope(s);
  const PolytopeSummary sum = summarize(p);
  const std::size_t j = sum.redundant.size();
  const SurfaceGenus g = polygon_genus(s.m() - j, j);

  TopologyReport r = detail::base_report(s);
  r.surface = g;
  r.genus = g.genus;
  r.summary = sum;
  const std::string surface = "S_" + std::to_string(g.genus);
  if (j == 0) {
    r.r_kind = RKind::Surface;
    r.r_topology = surface;
  } else {
    r.r_kind = RKind::SurfaceUnion;
    r.r_topology = std::to_string(g.components) + " disjoint copies of " + surface;
    r.notes.push_back("Z = Z' x " + detail::torus(j) + ", Z' from the " + std::to_string(g.m_effective) + "-gon");
  }
  if (g.m_effective == 5 && j == 0) r.z_note = "connected sum of 5 copies of S^3 x S^4";
  if (r.embeds) {
    r.n_kind = NKind::SurfaceBundle;
    r.n_topology = surface + "-bundle over " + detail::torus(s.m() - 2);
    r.notes.push_back("1 -> pi_1(" + surface + ") -> pi_1(N) -> Z^" + std::to_string(s.m() - 2) + " -> 1");
  } else {
    r.n_kind = NKind::Unclassified;
    r.n_topology = "unclassified (immersion only)";
  }
  detail::add_fibrations(r);
  return r;
}

/// chi(R_P) from the cell structure over P: each vertex lifts to 2^(m-2)
/// cells, each edge to 2^(m-1), the open polygon to 2^m.
inline long euler_characteristic_oracle(const PolytopePresentation &p) {
  if (p.n() != 2) throw Error(ErrorCode::NotAPolygon, "n must be 2");
  const auto rep = check_generic(p);
  if (!rep.generic || !is_bounded(p) || !rep.redundant_strict.empty() || !rep.redundant_touching.empty())
    throw Error(ErrorCode::NotAPolygon, "need a generic bounded polygon without redundancies");
  const auto vertices = enumerate_vertices(p);
  std::vector<int> touching(p.m(), 0);
  for (const auto &v : vertices)
    for (auto i : v.active_set) ++touching[i];
  long edges = 0;
  for (int t : touching) edges += t >= 2;
  const long m = static_cast<long>(p.m());
  return (1L << (m - 2)) * static_cast<long>(vertices.size()) - (1L << (m - 1)) * edges + (1L << m);
}

/// Columns of the reduced row echelon form of Gamma, which depends only on
/// the row space and so is unchanged by linear equivalence.
inline std::vector<RationalVector> gale_vectors(const QuadricSystem &s) {
  const EchelonForm e = row_reduce(s.gamma());
  std::vector<RationalVector> out;
  for (std::size_t k = 0; k < s.m(); ++k) {
    RationalVector v(e.rank());
    for (std::size_t j = 0; j < e.rank(); ++j) v[j] = e.reduced(j, k);
    out.push_back(std::move(v));
  }
  return out;
}

inline TopologyReport classify(const QuadricSystem &s) {
  detail::require_bounded(s);
  if (s.quadrics() <= 2) {
    TopologyReport r = s.quadrics() == 1 ? classify_one_quadric(s) : classify_two_quadrics(s);
    if (s.n() == 2) {
      // Triangles and quadrilaterals: R is still the polygon surface.
      r.summary = summarize(to_polytope(s));
      r.surface = polygon_genus(s.m() - r.summary->redundant.size(), r.summary->redundant.size());
      r.genus = r.surface->genus;
    }
    return r;
  }
  if (s.n() == 2) return classify_polygon(s);

  TopologyReport r = detail::base_report(s);
  if (s.n() == 0) {
    r.r_kind = RKind::Points;
    r.r_topology = std::to_string(detail::pow2(s.m())) + " points";
    r.n_kind = NKind::Torus;
    r.n_topology = detail::torus(s.m());
  } else {
    r.r_kind = RKind::Unclassified;
    r.r_topology = "unclassified";
    r.n_kind = NKind::Unclassified;
    r.n_topology = "unclassified";
    r.gale_vectors = gale_vectors(s);
    r.summary = summarize(to_polytope(s));
  }
  detail::add_fibrations(r);
  return r;
}

} // namespace quadlag
