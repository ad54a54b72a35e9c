#pragma once

#include <array>
#include <cstdio>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "quadlag/io.hpp"

#ifndef QUADLAG_VERSION
#define QUADLAG_VERSION "0.1.0"
#endif

namespace quadlag {

enum class Stage { Validate, Convert, Delzant, Embed, Classify, Sample };
enum class StageStatus { Ok, Negative, Skipped, Error };

inline constexpr std::array<Stage, 6> all_stages{Stage::Validate, Stage::Convert,  Stage::Delzant,
                                                 Stage::Embed,    Stage::Classify, Stage::Sample};

inline std::string_view to_string(Stage s) {
  switch (s) {
  case Stage::Validate: return "validate";
  case Stage::Convert: return "convert";
  case Stage::Delzant: return "delzant";
  case Stage::Embed: return "embed";
  case Stage::Classify: return "classify";
  case Stage::Sample: return "sample";
  }
  return "unknown";
}

inline std::string_view to_string(StageStatus s) {
  switch (s) {
  case StageStatus::Ok: return "ok";
  case StageStatus::Negative: return "negative";
  case StageStatus::Skipped: return "skipped";
  case StageStatus::Error: return "error";
  }
  return "unknown";
}

/// Comma-separated stage names, or "all".
inline std::set<Stage> parse_stages(const std::string &text) {
  std::set<Stage> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "all") {
      out.insert(all_stages.begin(), all_stages.end());
      continue;
    }
    bool found = false;
    for (Stage s : all_stages)
      if (to_string(s) == item) {
        out.insert(s);
        found = true;
      }
    if (!found) throw Error(ErrorCode::SchemaError, "stages: unknown stage '" + item + "'");
  }
  if (out.empty()) throw Error(ErrorCode::SchemaError, "stages: none given");
  return out;
}

/// Process exit code for a failure: 1 for mathematical verdicts, 2 for bad
/// input, 3 for numerical or internal failures.
inline int exit_code_for(ErrorCode code) {
  switch (code) {
  case ErrorCode::DegenerateSystem:
  case ErrorCode::Unbounded:
  case ErrorCode::NonGenericPresentation:
  case ErrorCode::NotFullRank: return 1;
  case ErrorCode::ConvergenceFailure:
  case ErrorCode::RankDeficient:
  case ErrorCode::Internal: return 3;
  default: return 2;
  }
}

inline ErrorCode error_code_from_string(const std::string &s) {
  for (int i = 0; i <= static_cast<int>(ErrorCode::Internal); ++i)
    if (to_string(static_cast<ErrorCode>(i)) == s) return static_cast<ErrorCode>(i);
  throw Error(ErrorCode::SchemaError, "unknown error code '" + s + "'");
}

struct ReportError {
  ErrorCode code = ErrorCode::Internal;
  std::string message;
  friend bool operator==(const ReportError &, const ReportError &) = default;
};

struct StageRecord {
  Stage stage = Stage::Validate;
  StageStatus status = StageStatus::Skipped;
  std::string reason;
  std::optional<NondegeneracyReport> nondegeneracy;
  std::optional<GenericityReport> genericity;
  std::optional<QuadricSystem> system;
  std::optional<PolytopePresentation> presentation;
  std::optional<EmbeddingVerdict> embedding;
  std::optional<TopologyReport> topology;
  std::optional<ResidualReport> residual;
  std::optional<ReportError> error;
  friend bool operator==(const StageRecord &, const StageRecord &) = default;
};

struct ReportDocument {
  std::string version = QUADLAG_VERSION;
  Json instance;
  std::vector<StageRecord> stages;
  std::optional<ReportError> error; // failure before any stage ran
  std::string verdict;
  int exit_code = 0;
  friend bool operator==(const ReportDocument &, const ReportDocument &) = default;
};

struct PipelineOptions {
  std::set<Stage> stages{all_stages.begin(), all_stages.end()};
  std::size_t sample_count = 100;
  std::uint64_t sample_seed = 0;
  NumericTolerances tolerances;
};

namespace detail {

inline std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << x;
  return os.str();
}

inline std::string rational_tuple(const RationalVector &v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
  return s + ")";
}

inline int record_exit_code(const StageRecord &r) {
  switch (r.status) {
  case StageStatus::Ok:
  case StageStatus::Skipped: return 0;
  case StageStatus::Negative: return 1;
  case StageStatus::Error: return r.error ? exit_code_for(r.error->code) : 3;
  }
  return 3;
}

inline int combine_exit_codes(const std::vector<int> &codes) {
  for (int c : {2, 3, 1})
    if (std::find(codes.begin(), codes.end(), c) != codes.end()) return c;
  return 0;
}

} // namespace detail

/// One line of human-readable detail per stage.
inline std::string stage_detail(const StageRecord &r) {
  if (r.status == StageStatus::Skipped) return r.reason;
  if (r.error) return r.error->message;
  switch (r.stage) {
  case Stage::Validate: {
    std::string out;
    if (r.genericity) out += r.genericity->generic ? "generic presentation; " : "presentation not generic; ";
    if (r.nondegeneracy) {
      const auto &n = *r.nondegeneracy;
      if (n.nonempty_nondegenerate) out += "nonempty and nondegenerate";
      else if (!n.c_in_full_cone) out += "empty: c outside the cone of the columns";
      else out += "degenerate, witness S=" + format_index_set(*n.violating_subset);
      if (n.minimal_candidate) out += "; columns sum to zero";
    }
    return out;
  }
  case Stage::Convert: {
    std::string out;
    if (r.system) out += "m=" + std::to_string(r.system->m()) + " n=" + std::to_string(r.system->n());
    if (r.genericity) out += r.genericity->generic ? ", generic" : ", not generic";
    return out;
  }
  case Stage::Delzant:
  case Stage::Embed: {
    const auto &v = *r.embedding;
    if (v.embeds) return r.stage == Stage::Delzant ? "Delzant" : "N embeds";
    std::string out = r.stage == Stage::Delzant ? "not Delzant" : "immersion only";
    if (v.witness) {
      out += ", I=" + format_index_set(v.witness->index_set) + " index " + to_string(v.witness->index);
      if (v.witness->vertex) out += " at vertex " + detail::rational_tuple(*v.witness->vertex);
    }
    return out;
  }
  case Stage::Classify: return "R = " + r.topology->r_topology + "; N = " + r.topology->n_topology;
  case Stage::Sample: {
    const auto &s = *r.residual;
    return std::to_string(s.samples) + " samples, quadric " + detail::format_double(s.max_quadric_residual) +
           ", pullback " + detail::format_double(s.max_symplectic_pullback) + ", min sv " +
           detail::format_double(s.min_frame_singular_value);
  }
  }
  return "";
}

/// Fixed-width table: stage, status, detail.
inline std::string format_summary(const ReportDocument &doc) {
  std::ostringstream os;
  if (doc.error) {
    os << "error: " << doc.error->message << '\n';
  } else {
    for (const auto &r : doc.stages)
      os << std::left << std::setw(10) << to_string(r.stage) << std::setw(10) << to_string(r.status) << stage_detail(r)
         << '\n';
  }
  os << "verdict: " << doc.verdict << " (exit " << doc.exit_code << ")\n";
  return os.str();
}

/// Replaces a recipe by the system or presentation it builds.
inline InstanceFile materialize(const InstanceFile &instance) {
  if (!instance.recipe) return instance;
  InstanceFile out;
  out.name = instance.name.empty() ? to_string(*instance.recipe) : instance.name;
  out.description = instance.description;
  if (instance.recipe->kind == RecipeKind::Random) {
    out.format = InstanceFormat::Quadrics;
    out.system = random_system(instance.recipe->dim, instance.recipe->second, instance.seed, instance.recipe->bound).system;
  } else {
    out.format = InstanceFormat::Polytope;
    out.presentation = build(*instance.recipe, instance.seed);
  }
  return out;
}

inline ReportDocument run_pipeline(const InstanceFile &instance, const PipelineOptions &options = {}) {
  ReportDocument doc;
  doc.instance = to_json(instance);

  std::optional<QuadricSystem> system;
  std::optional<PolytopePresentation> presentation;
  try {
    auto built = materialize(instance);
    system = std::move(built.system);
    presentation = std::move(built.presentation);
  } catch (const Error &e) {
    doc.error = ReportError{e.code(), e.what()};
    doc.exit_code = exit_code_for(e.code());
    doc.verdict = "input error";
    return doc;
  }

  auto need_system = [&]() -> const QuadricSystem & {
    if (!system) system = to_quadrics(*presentation);
    return *system;
  };
  auto need_presentation = [&]() -> const PolytopePresentation & {
    if (!presentation) presentation = to_polytope(*system);
    return *presentation;
  };

  std::optional<std::string> blocked;
  for (Stage stage : all_stages) {
    if (!options.stages.count(stage)) continue;
    StageRecord rec;
    rec.stage = stage;
    if (blocked) {
      rec.reason = *blocked;
      doc.stages.push_back(std::move(rec));
      continue;
    }
    try {
      switch (stage) {
      case Stage::Validate: {
        bool ok = true;
        if (presentation && !system) {
          rec.genericity = check_generic(*presentation);
          ok = rec.genericity->generic;
        }
        if (ok) {
          rec.nondegeneracy = validate(need_system());
          ok = rec.nondegeneracy->nonempty_nondegenerate;
        }
        rec.status = ok ? StageStatus::Ok : StageStatus::Negative;
        if (!ok) blocked = "validate stage returned a negative verdict";
        break;
      }
      case Stage::Convert: {
        const bool from_polytope = presentation.has_value();
        if (from_polytope) {
          rec.genericity = check_generic(*presentation);
          if (rec.genericity->generic) rec.system = need_system();
        } else {
          rec.presentation = need_presentation();
          rec.genericity = check_generic(*rec.presentation);
          rec.system = *system;
        }
        if (from_polytope) rec.presentation = *presentation;
        rec.status = rec.genericity->generic ? StageStatus::Ok : StageStatus::Negative;
        if (!rec.genericity->generic) blocked = "presentation is not generic";
        break;
      }
      case Stage::Delzant:
        rec.embedding = delzant_check(need_presentation());
        rec.status = rec.embedding->embeds ? StageStatus::Ok : StageStatus::Negative;
        break;
      case Stage::Embed:
        rec.embedding = embedding_criterion_quadrics(need_system());
        rec.status = rec.embedding->embeds ? StageStatus::Ok : StageStatus::Negative;
        break;
      case Stage::Classify:
        if (!is_bounded(need_system())) {
          rec.reason = "unbounded: classification needs a compact R";
          break;
        }
        rec.topology = classify(*system);
        rec.status = StageStatus::Ok;
        break;
      case Stage::Sample:
        rec.residual = verify_lagrangian(need_system(), options.sample_count, options.sample_seed, options.tolerances);
        rec.status = rec.residual->passed ? StageStatus::Ok : StageStatus::Negative;
        break;
      }
    } catch (const Error &e) {
      rec.error = ReportError{e.code(), e.what()};
      rec.status = exit_code_for(e.code()) == 1 ? StageStatus::Negative : StageStatus::Error;
      if (e.code() == ErrorCode::DegenerateSystem || e.code() == ErrorCode::NonGenericPresentation)
        blocked = std::string("input rejected: ") + e.what();
    }
    doc.stages.push_back(std::move(rec));
  }

  std::vector<int> codes;
  std::string verdict;
  for (const auto &r : doc.stages) {
    codes.push_back(detail::record_exit_code(r));
    if (!verdict.empty()) verdict += ", ";
    verdict += std::string(to_string(r.stage)) + " " + std::string(to_string(r.status));
  }
  doc.exit_code = detail::combine_exit_codes(codes);
  doc.verdict = verdict.empty() ? "no stages run" : verdict;
  return doc;
}

// ---- report serialization ----------------------------------------------

inline Json to_json(const ReportError &e) { return {{"code", to_string(e.code)}, {"message", e.message}}; }

inline ReportError report_error_from_json(const Json &j) {
  return {error_code_from_string(j.at("code")), j.at("message")};
}

inline Json to_json(const StageRecord &r) {
  Json out = {{"stage", to_string(r.stage)}, {"status", to_string(r.status)}};
  if (!r.reason.empty()) out["reason"] = r.reason;
  if (r.nondegeneracy) out["nondegeneracy"] = to_json(*r.nondegeneracy);
  if (r.genericity) out["genericity"] = to_json(*r.genericity);
  if (r.system) out["system"] = to_json(*r.system);
  if (r.presentation) out["presentation"] = to_json(*r.presentation);
  if (r.embedding) out["embedding"] = to_json(*r.embedding);
  if (r.topology) out["topology"] = to_json(*r.topology);
  if (r.residual) out["residual"] = to_json(*r.residual);
  if (r.error) out["error"] = to_json(*r.error);
  return out;
}

inline StageRecord stage_record_from_json(const Json &j) {
  StageRecord r;
  r.stage = detail::enum_from_string(j.at("stage"), {Stage::Validate, Stage::Convert, Stage::Delzant, Stage::Embed,
                                                     Stage::Classify, Stage::Sample});
  r.status = detail::enum_from_string(j.at("status"), {StageStatus::Ok, StageStatus::Negative, StageStatus::Skipped,
                                                       StageStatus::Error});
  if (j.contains("reason")) r.reason = j["reason"];
  if (j.contains("nondegeneracy")) r.nondegeneracy = nondegeneracy_from_json(j["nondegeneracy"]);
  if (j.contains("genericity")) r.genericity = genericity_from_json(j["genericity"]);
  if (j.contains("system")) r.system = system_from_json(j["system"]);
  if (j.contains("presentation")) r.presentation = presentation_from_json(j["presentation"]);
  if (j.contains("embedding")) r.embedding = embedding_from_json(j["embedding"]);
  if (j.contains("topology")) r.topology = topology_from_json(j["topology"]);
  if (j.contains("residual")) r.residual = residual_from_json(j["residual"]);
  if (j.contains("error")) r.error = report_error_from_json(j["error"]);
  return r;
}

inline Json to_json(const ReportDocument &d) {
  Json out = {{"tool", "quadlag"}, {"version", d.version}, {"instance", d.instance}, {"stages", Json::array()},
              {"verdict", d.verdict}, {"exit_code", d.exit_code}};
  for (const auto &r : d.stages) out["stages"].push_back(to_json(r));
  if (d.error) out["error"] = to_json(*d.error);
  return out;
}

inline ReportDocument report_from_json(const Json &j) {
  ReportDocument d;
  d.version = j.at("version");
  d.instance = j.at("instance");
  for (const auto &r : j.at("stages")) d.stages.push_back(stage_record_from_json(r));
  if (j.contains("error")) d.error = report_error_from_json(j["error"]);
  d.verdict = j.at("verdict");
  d.exit_code = j.at("exit_code");
  return d;
}

} // namespace quadlag
