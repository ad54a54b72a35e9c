#pragma once

#include <nlohmann/json.hpp>

#include <istream>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>

#include "quadlag/corpus.hpp"
#include "quadlag/numeric.hpp"
#include "quadlag/topology.hpp"

namespace quadlag {

using Json = nlohmann::json;

enum class InstanceFormat { Quadrics, Polytope, Recipe };

inline std::string_view to_string(InstanceFormat f) {
  switch (f) {
  case InstanceFormat::Quadrics: return "quadrics";
  case InstanceFormat::Polytope: return "polytope";
  case InstanceFormat::Recipe: return "recipe";
  }
  return "unknown";
}

struct InstanceFile {
  InstanceFormat format = InstanceFormat::Quadrics;
  std::optional<QuadricSystem> system;
  std::optional<PolytopePresentation> presentation;
  std::optional<Recipe> recipe;
  std::uint64_t seed = 0;
  std::string name;
  std::string description;
  friend bool operator==(const InstanceFile &, const InstanceFile &) = default;
};

// ---- reading -------------------------------------------------------------

namespace detail {

[[noreturn]] inline void schema_error(const std::string &path, const std::string &what) {
  throw Error(ErrorCode::SchemaError, path + ": " + what);
}

inline Rational rational_from_json(const Json &j, const std::string &path) {
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? Rational(Integer(std::to_string(j.get<std::uint64_t>())))
                                  : Rational(Integer(std::to_string(j.get<std::int64_t>())));
  }
  if (j.is_number_float()) schema_error(path, "floating-point numbers are not accepted; use \"p/q\"");
  if (!j.is_string()) schema_error(path, "expected a rational \"p/q\" or an integer");
  static const std::regex pattern(R"(\s*([+-]?[0-9]+)(?:\s*/\s*([0-9]+))?\s*)");
  const auto &text = j.get_ref<const std::string &>();
  std::smatch match;
  if (!std::regex_match(text, match, pattern)) schema_error(path, "malformed rational '" + text + "'");
  const Integer num(match[1].str().front() == '+' ? match[1].str().substr(1) : match[1].str());
  const Integer den(match[2].matched ? match[2].str() : "1");
  if (den == 0) schema_error(path, "zero denominator in '" + text + "'");
  return make_rational(num, den);
}

inline RationalVector vector_from_json(const Json &j, const std::string &path) {
  if (!j.is_array()) schema_error(path, "expected an array");
  RationalVector out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(rational_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline RationalMatrix matrix_from_json(const Json &j, const std::string &path) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected a nonempty array of rows");
  std::vector<RationalVector> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    rows.push_back(vector_from_json(j[i], path + "[" + std::to_string(i) + "]"));
    if (rows.back().size() != rows.front().size())
      schema_error(path + "[" + std::to_string(i) + "]", "row length " + std::to_string(rows.back().size()) +
                                                             " differs from " + std::to_string(rows.front().size()));
  }
  if (rows.front().empty()) schema_error(path, "rows are empty");
  return RationalMatrix::from_rows(rows, rows.front().size());
}

inline const Json &field(const Json &j, const char *key) {
  if (!j.contains(key)) schema_error(key, "missing field");
  return j.at(key);
}

inline void check_declared(const Json &j, const char *key, std::size_t actual) {
  if (!j.contains(key)) return;
  const Json &v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    schema_error(key, "expected a nonnegative integer");
  if (v.get<std::uint64_t>() != actual)
    schema_error(key, "declared " + std::to_string(v.get<std::uint64_t>()) + " but data has " + std::to_string(actual));
}

inline std::pair<std::size_t, std::size_t> line_and_column(const std::string &text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

} // namespace detail

inline InstanceFile instance_from_json(const Json &j) {
  using namespace detail;
  if (!j.is_object()) schema_error("$", "expected an object");
  static const std::set<std::string> known{"format", "gamma", "c", "a", "b", "recipe", "seed", "m", "n", "name", "description"};
  for (const auto &[key, _] : j.items())
    if (!known.count(key)) schema_error(key, "unknown field");
  const Json &fmt = field(j, "format");
  if (!fmt.is_string()) schema_error("format", "expected a string");
  InstanceFile out;
  if (j.contains("name")) {
    if (!j["name"].is_string()) schema_error("name", "expected a string");
    out.name = j["name"];
  }
  if (j.contains("description")) {
    if (!j["description"].is_string()) schema_error("description", "expected a string");
    out.description = j["description"];
  }
  const std::string f = fmt;
  if (f == "quadrics") {
    out.format = InstanceFormat::Quadrics;
    RationalMatrix g = matrix_from_json(field(j, "gamma"), "gamma");
    RationalVector c = vector_from_json(field(j, "c"), "c");
    if (c.size() != g.rows())
      schema_error("c", "length " + std::to_string(c.size()) + " but gamma has " + std::to_string(g.rows()) + " rows");
    if (g.rows() > g.cols()) schema_error("gamma", "more quadrics than variables");
    check_declared(j, "m", g.cols());
    check_declared(j, "n", g.cols() - g.rows());
    out.system.emplace(std::move(g), std::move(c));
  } else if (f == "polytope") {
    out.format = InstanceFormat::Polytope;
    RationalMatrix a = matrix_from_json(field(j, "a"), "a");
    RationalVector b = vector_from_json(field(j, "b"), "b");
    if (b.size() != a.rows())
      schema_error("b", "length " + std::to_string(b.size()) + " but a has " + std::to_string(a.rows()) + " rows");
    check_declared(j, "m", a.rows());
    check_declared(j, "n", a.cols());
    out.presentation.emplace(std::move(a), std::move(b));
  } else if (f == "recipe") {
    out.format = InstanceFormat::Recipe;
    const Json &r = field(j, "recipe");
    if (!r.is_string()) schema_error("recipe", "expected a string");
    out.recipe = parse_recipe(r.get<std::string>());
    if (j.contains("seed")) {
      if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0))
        schema_error("seed", "expected a nonnegative integer");
      out.seed = j["seed"].get<std::uint64_t>();
    }
  } else {
    schema_error("format", "unknown format '" + f + "'");
  }
  for (const char *key : {"gamma", "c"})
    if (out.format != InstanceFormat::Quadrics && j.contains(key)) schema_error(key, "not valid for format " + f);
  for (const char *key : {"a", "b"})
    if (out.format != InstanceFormat::Polytope && j.contains(key)) schema_error(key, "not valid for format " + f);
  for (const char *key : {"recipe", "seed"})
    if (out.format != InstanceFormat::Recipe && j.contains(key)) schema_error(key, "not valid for format " + f);
  return out;
}

inline Json parse_json_text(const std::string &text, const std::string &source = "<input>") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error &e) {
    const auto [line, col] = detail::line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw Error(ErrorCode::ParseError,
                source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON");
  }
}

inline InstanceFile parse_instance(std::istream &in, const std::string &source = "<input>") {
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json(parse_json_text(buf.str(), source));
}

inline InstanceFile parse_instance_text(const std::string &text, const std::string &source = "<input>") {
  return instance_from_json(parse_json_text(text, source));
}

// ---- writing -------------------------------------------------------------

inline Json to_json(const Rational &q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_str();
}

inline Json to_json(const RationalVector &v) {
  Json out = Json::array();
  for (const auto &x : v) out.push_back(to_json(x));
  return out;
}

inline Json to_json(const RationalMatrix &m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(to_json(m.row_vector(i)));
  return out;
}

/// 1-based, as everywhere in reports.
inline Json index_set_json(const IndexSet &s) {
  Json out = Json::array();
  for (auto i : s) out.push_back(i + 1);
  return out;
}

inline IndexSet index_set_from_json(const Json &j) {
  IndexSet out;
  for (const auto &v : j) {
    const auto i = v.get<std::size_t>();
    if (i == 0) detail::schema_error("index set", "indices are 1-based");
    out.push_back(i - 1);
  }
  return out;
}

inline Json to_json(const QuadricSystem &s) {
  return {{"format", "quadrics"}, {"gamma", to_json(s.gamma())}, {"c", to_json(s.c())}};
}

inline Json to_json(const PolytopePresentation &p) {
  return {{"format", "polytope"}, {"a", to_json(p.a())}, {"b", to_json(p.b())}};
}

inline QuadricSystem system_from_json(const Json &j) { return *instance_from_json(j).system; }

inline PolytopePresentation presentation_from_json(const Json &j) { return *instance_from_json(j).presentation; }

inline Json to_json(const InstanceFile &f) {
  Json out;
  switch (f.format) {
  case InstanceFormat::Quadrics: out = to_json(*f.system); break;
  case InstanceFormat::Polytope: out = to_json(*f.presentation); break;
  case InstanceFormat::Recipe: out = {{"format", "recipe"}, {"recipe", to_string(*f.recipe)}, {"seed", f.seed}}; break;
  }
  if (!f.name.empty()) out["name"] = f.name;
  if (!f.description.empty()) out["description"] = f.description;
  return out;
}

inline Json to_json(const NondegeneracyReport &r) {
  Json out = {{"nonempty_nondegenerate", r.nonempty_nondegenerate},
              {"c_in_full_cone", r.c_in_full_cone},
              {"minimal_candidate", r.minimal_candidate},
              {"violating_subset", nullptr}};
  if (r.violating_subset) out["violating_subset"] = index_set_json(*r.violating_subset);
  return out;
}

inline NondegeneracyReport nondegeneracy_from_json(const Json &j) {
  NondegeneracyReport r;
  r.nonempty_nondegenerate = j.at("nonempty_nondegenerate");
  r.c_in_full_cone = j.at("c_in_full_cone");
  r.minimal_candidate = j.at("minimal_candidate");
  if (!j.at("violating_subset").is_null()) r.violating_subset = index_set_from_json(j.at("violating_subset"));
  return r;
}

inline Json to_json(const Vertex &v) { return {{"point", to_json(v.point)}, {"active_set", index_set_json(v.active_set)}}; }

inline Vertex vertex_from_json(const Json &j) {
  return {detail::vector_from_json(j.at("point"), "point"), index_set_from_json(j.at("active_set"))};
}

inline Json to_json(const GenericityReport &r) {
  Json out = {{"generic", r.generic},
              {"feasible", r.feasible},
              {"dimension_full", r.dimension_full},
              {"has_vertex", r.has_vertex},
              {"redundant_strict", index_set_json(r.redundant_strict)},
              {"redundant_touching", index_set_json(r.redundant_touching)},
              {"violating_point", nullptr}};
  if (r.violating_point) out["violating_point"] = to_json(*r.violating_point);
  return out;
}

inline GenericityReport genericity_from_json(const Json &j) {
  GenericityReport r;
  r.generic = j.at("generic");
  r.feasible = j.at("feasible");
  r.dimension_full = j.at("dimension_full");
  r.has_vertex = j.at("has_vertex");
  r.redundant_strict = index_set_from_json(j.at("redundant_strict"));
  r.redundant_touching = index_set_from_json(j.at("redundant_touching"));
  if (!j.at("violating_point").is_null()) r.violating_point = vertex_from_json(j.at("violating_point"));
  return r;
}

inline Json to_json(const LatticeIndex &i) { return i.is_infinite() ? Json("infinite") : Json(i.value->get_str()); }

inline LatticeIndex lattice_index_from_json(const Json &j) {
  const std::string s = j;
  if (s == "infinite") return {};
  return {Integer(s)};
}

inline Json to_json(const EmbeddingVerdict &v) {
  Json out = {{"embeds", v.embeds}, {"method", to_string(v.method)}, {"witness", nullptr}};
  if (v.witness) {
    Json w = {{"index_set", index_set_json(v.witness->index_set)}, {"index", to_json(v.witness->index)}};
    if (v.witness->vertex) w["vertex"] = to_json(*v.witness->vertex);
    out["witness"] = w;
  }
  return out;
}

inline EmbeddingVerdict embedding_from_json(const Json &j) {
  EmbeddingVerdict v;
  v.embeds = j.at("embeds");
  const std::string method = j.at("method");
  for (auto m : {EmbeddingMethod::QuadricSide, EmbeddingMethod::PolytopeSide, EmbeddingMethod::Both})
    if (to_string(m) == method) v.method = m;
  if (!j.at("witness").is_null()) {
    const Json &w = j.at("witness");
    EmbeddingWitness out{index_set_from_json(w.at("index_set")), std::nullopt, lattice_index_from_json(w.at("index"))};
    if (w.contains("vertex")) out.vertex = detail::vector_from_json(w.at("vertex"), "vertex");
    v.witness = out;
  }
  return v;
}

inline Json to_json(const FiniteAbelianGroup &g) {
  Json factors = Json::array();
  for (const auto &d : g.invariant_factors) factors.push_back(d.get_str());
  return {{"invariant_factors", factors}, {"order", g.order().get_str()}, {"description", to_string(g)}};
}

namespace detail {

template <class E> E enum_from_string(const Json &j, std::initializer_list<E> values) {
  const std::string s = j;
  for (E e : values)
    if (to_string(e) == s) return e;
  schema_error("report", "unknown tag '" + s + "'");
}

template <class T, class F> Json optional_json(const std::optional<T> &v, F &&f) {
  return v ? f(*v) : Json(nullptr);
}

} // namespace detail

inline Json to_json(const TopologyReport &r) {
  Json out;
  out["m"] = r.m;
  out["n"] = r.n;
  out["r_kind"] = to_string(r.r_kind);
  out["r_topology"] = r.r_topology;
  out["n_kind"] = to_string(r.n_kind);
  out["n_topology"] = r.n_topology;
  out["z_note"] = r.z_note ? Json(*r.z_note) : Json(nullptr);
  out["fibrations"] = Json::array();
  for (const auto &f : r.fibrations)
    out["fibrations"].push_back({{"total", f.total}, {"base", f.base}, {"fiber", f.fiber}, {"kind", f.kind}});
  out["embeds"] = r.embeds;
  out["immersion_only"] = r.immersion_only;
  out["minimal_candidate"] = r.minimal_candidate;
  out["d_free"] = r.d_free;
  out["genus"] = r.genus ? Json(*r.genus) : Json(nullptr);
  out["two_quadrics"] = detail::optional_json(r.two_quadrics, [](const TwoQuadricForm &f) {
    Json t = {{"p", f.p},
              {"q", f.q},
              {"permutation", index_set_json(f.permutation)},
              {"free_combinatorial", f.free_combinatorial},
              {"free_brute_force", f.free_brute_force},
              {"case", f.sign_case ? Json(*f.sign_case) : Json(nullptr)},
              {"triple", nullptr}};
    if (f.triple) t["triple"] = {{"k", f.triple->k}, {"p", f.triple->p}, {"q", f.triple->q}};
    return t;
  });
  out["surface"] = detail::optional_json(r.surface, [](const SurfaceGenus &g) {
    return Json{{"m_effective", g.m_effective}, {"genus", g.genus}, {"components", g.components}};
  });
  out["gale_vectors"] = Json::array();
  for (const auto &v : r.gale_vectors) out["gale_vectors"].push_back(to_json(v));
  out["summary"] = detail::optional_json(r.summary, [](const PolytopeSummary &s) {
    return Json{{"m", s.m}, {"n", s.n}, {"vertices", s.vertices}, {"facets", s.facets},
                {"redundant", index_set_json(s.redundant)}};
  });
  out["notes"] = r.notes;
  return out;
}

inline TopologyReport topology_from_json(const Json &j) {
  TopologyReport r;
  r.m = j.at("m");
  r.n = j.at("n");
  r.r_kind = detail::enum_from_string(j.at("r_kind"), {RKind::Points, RKind::Sphere, RKind::SphereProduct,
                                                       RKind::Surface, RKind::SurfaceUnion, RKind::Unclassified});
  r.r_topology = j.at("r_topology");
  r.n_kind = detail::enum_from_string(j.at("n_kind"), {NKind::Circle, NKind::Torus, NKind::SphereTimesCircle,
                                                       NKind::KleinBottle, NKind::Nkpq, NKind::SurfaceBundle,
                                                       NKind::Unclassified});
  r.n_topology = j.at("n_topology");
  if (!j.at("z_note").is_null()) r.z_note = j.at("z_note").get<std::string>();
  for (const auto &f : j.at("fibrations")) r.fibrations.push_back({f.at("total"), f.at("base"), f.at("fiber"), f.at("kind")});
  r.embeds = j.at("embeds");
  r.immersion_only = j.at("immersion_only");
  r.minimal_candidate = j.at("minimal_candidate");
  r.d_free = j.at("d_free");
  if (!j.at("genus").is_null()) r.genus = j.at("genus").get<std::uint64_t>();
  if (const Json &t = j.at("two_quadrics"); !t.is_null()) {
    TwoQuadricForm f;
    f.p = t.at("p");
    f.q = t.at("q");
    f.permutation = index_set_from_json(t.at("permutation"));
    f.free_combinatorial = t.at("free_combinatorial");
    f.free_brute_force = t.at("free_brute_force");
    if (!t.at("case").is_null()) f.sign_case = t.at("case").get<int>();
    if (!t.at("triple").is_null()) f.triple = NTriple{t["triple"].at("k"), t["triple"].at("p"), t["triple"].at("q")};
    r.two_quadrics = f;
  }
  if (const Json &s = j.at("surface"); !s.is_null())
    r.surface = SurfaceGenus{s.at("m_effective"), s.at("genus"), s.at("components")};
  for (const auto &v : j.at("gale_vectors")) r.gale_vectors.push_back(detail::vector_from_json(v, "gale_vectors"));
  if (const Json &s = j.at("summary"); !s.is_null())
    r.summary = PolytopeSummary{s.at("m"), s.at("n"), s.at("vertices"), s.at("facets"), index_set_from_json(s.at("redundant"))};
  r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

inline Json to_json(const ResidualReport &r) {
  return {{"samples", r.samples},
          {"max_quadric_residual", r.max_quadric_residual},
          {"min_frame_singular_value", r.min_frame_singular_value},
          {"max_symplectic_pullback", r.max_symplectic_pullback},
          {"seed", r.seed},
          {"passed", r.passed}};
}

inline ResidualReport residual_from_json(const Json &j) {
  ResidualReport r;
  r.samples = j.at("samples");
  r.max_quadric_residual = j.at("max_quadric_residual");
  r.min_frame_singular_value = j.at("min_frame_singular_value");
  r.max_symplectic_pullback = j.at("max_symplectic_pullback");
  r.seed = j.at("seed");
  r.passed = j.at("passed");
  return r;
}

} // namespace quadlag
