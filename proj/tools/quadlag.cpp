#include <quadlag/pipeline.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace quadlag;

namespace {

struct Options {
  std::string input;
  std::string out;
  std::string batch;
  std::vector<std::string> tolerance;
  std::string stages = "all";
  std::string index_set;
  std::size_t count = 100;
  std::uint64_t seed = 0;
  std::string recipe;
};

/// What one input file produced: a structured document and human text.
struct Outcome {
  Json document;
  std::string text;
  std::string verdict;
  int exit_code = 0;
};

using Command = std::function<Outcome(const InstanceFile &, const Options &, const NumericTolerances &)>;

NumericTolerances parse_tolerances(const std::vector<std::string> &items) {
  NumericTolerances t;
  for (const auto &item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::SchemaError, "--tolerance expects key=value, got " + item);
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      std::size_t used = 0;
      if (key == "max_iterations") {
        t.max_iterations = std::stoi(value, &used);
      } else {
        const double x = std::stod(value, &used);
        if (key == "acceptance") t.acceptance = x;
        else if (key == "lagrangian") t.lagrangian = x;
        else if (key == "rank") t.rank = x;
        else throw Error(ErrorCode::SchemaError, "unknown tolerance " + key);
      }
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::logic_error &) {
      throw Error(ErrorCode::SchemaError, "bad value for tolerance " + key + ": " + value);
    }
  }
  return t;
}

IndexSet parse_index_set(const std::string &text, std::size_t m) {
  IndexSet out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(part, &used);
    } catch (const std::logic_error &) {
      used = 0;
    }
    if (used != part.size() || v < 1 || static_cast<std::size_t>(v) > m)
      throw Error(ErrorCode::SchemaError, "--index-set entries must lie in 1.." + std::to_string(m) + ", got " + part);
    out.push_back(static_cast<std::size_t>(v - 1));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Json tool_header(const InstanceFile &instance) {
  return {{"tool", "quadlag"}, {"version", QUADLAG_VERSION}, {"instance", to_json(instance)}};
}

Outcome error_outcome(const Error &e, Json base = Json::object()) {
  Outcome o;
  base["tool"] = "quadlag";
  base["version"] = QUADLAG_VERSION;
  base["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
  o.exit_code = exit_code_for(e.code());
  base["exit_code"] = o.exit_code;
  o.document = std::move(base);
  o.text = std::string("error: ") + e.what() + "\n";
  o.verdict = std::string(to_string(e.code()));
  return o;
}

Outcome pipeline_outcome(const InstanceFile &instance, std::set<Stage> stages, const Options &opt,
                         const NumericTolerances &tol) {
  PipelineOptions p;
  p.stages = std::move(stages);
  p.sample_count = opt.count;
  p.sample_seed = opt.seed;
  p.tolerances = tol;
  const auto doc = run_pipeline(instance, p);
  return {to_json(doc), format_summary(doc), doc.verdict, doc.exit_code};
}

Command stage_command(std::set<Stage> stages) {
  return [stages](const InstanceFile &f, const Options &o, const NumericTolerances &t) {
    return pipeline_outcome(f, stages, o, t);
  };
}

QuadricSystem system_of(const InstanceFile &f) {
  auto m = materialize(f);
  return m.system ? *m.system : to_quadrics(*m.presentation);
}

Outcome convert_command(const InstanceFile &f, const Options &, const NumericTolerances &) {
  auto m = materialize(f);
  InstanceFile out;
  out.name = m.name;
  out.description = m.description;
  if (m.system) {
    out.format = InstanceFormat::Polytope;
    out.presentation = to_polytope(*m.system);
  } else {
    out.format = InstanceFormat::Quadrics;
    out.system = to_quadrics(*m.presentation);
  }
  Outcome o;
  o.document = to_json(out);
  o.text = o.document.dump(2) + "\n";
  o.verdict = "converted to " + std::string(to_string(out.format));
  return o;
}

Outcome isotropy_command(const InstanceFile &f, const Options &opt, const NumericTolerances &) {
  const auto s = system_of(f);
  const auto excluded = parse_index_set(opt.index_set, s.m());
  const auto group = isotropy_group(s, excluded);
  const auto cmp = sublattice(s, excluded);
  Outcome o;
  o.document = tool_header(f);
  o.document["index_set"] = index_set_json(excluded);
  o.document["isotropy"] = to_json(group);
  o.document["lattice_index"] = to_json(cmp.index);
  o.verdict = "I=" + format_index_set(excluded) + " isotropy " + to_string(group);
  o.text = o.verdict + ", index of L_I in L " + to_string(cmp.index) + "\n";
  return o;
}

Outcome sample_command(const InstanceFile &f, const Options &opt, const NumericTolerances &tol) {
  const auto s = system_of(f);
  const auto samples = sample_points(s, opt.count, opt.seed, tol);
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t k = 0; k < s.m(); ++k) os << (k ? " " : "") << 'u' << k + 1;
  os << " residual\n";
  Json rows = Json::array();
  for (const auto &p : samples) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < p.u.size(); ++k) {
      os << p.u[k] << ' ';
      row.push_back(p.u[k]);
    }
    os << p.residual << '\n';
    rows.push_back({{"u", row}, {"residual", p.residual}});
  }
  Outcome o;
  o.document = tool_header(f);
  o.document["seed"] = opt.seed;
  o.document["samples"] = rows;
  o.text = os.str();
  o.verdict = std::to_string(samples.size()) + " samples";
  return o;
}

Outcome run_file(const std::string &path, const Command &cmd, const Options &opt, const NumericTolerances &tol) {
  InstanceFile instance;
  try {
    if (path == "-") {
      instance = parse_instance(std::cin, "<stdin>");
    } else {
      std::ifstream in(path);
      if (!in) throw Error(ErrorCode::ParseError, path + ": cannot open file");
      instance = parse_instance(in, path);
    }
  } catch (const Error &e) {
    return error_outcome(e, {{"input", path}});
  }
  try {
    return cmd(instance, opt, tol);
  } catch (const Error &e) {
    return error_outcome(e, tool_header(instance));
  }
}

void write_document(const std::string &path, const Json &doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, path + ": cannot write output");
  out << doc.dump(2) << '\n';
}

int run_batch(const Command &cmd, const Options &opt, const NumericTolerances &tol) {
  std::vector<fs::path> files;
  for (const auto &e : fs::directory_iterator(opt.batch))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (!opt.out.empty()) fs::create_directories(opt.out);

  std::vector<Outcome> results(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) results[i] = run_file(files[i].string(), cmd, opt, tol);
  };
  const unsigned n = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), files.size()));
  std::vector<std::future<void>> pool;
  for (unsigned t = 0; t < n; ++t) pool.push_back(std::async(std::launch::async, worker));
  for (auto &f : pool) f.get();

  std::vector<int> codes;
  std::size_t width = 4;
  for (const auto &f : files) width = std::max(width, f.filename().string().size());
  std::cout << std::left << std::setw(static_cast<int>(width) + 2) << "file" << std::setw(6) << "exit" << "verdict\n";
  for (std::size_t i = 0; i < files.size(); ++i) {
    const auto name = files[i].filename().string();
    std::cout << std::setw(static_cast<int>(width) + 2) << name << std::setw(6) << results[i].exit_code
              << results[i].verdict << '\n';
    if (!opt.out.empty())
      write_document((fs::path(opt.out) / (files[i].stem().string() + ".report.json")).string(), results[i].document);
    codes.push_back(results[i].exit_code);
  }
  return detail::combine_exit_codes(codes);
}

int run(const Command &cmd, const Options &opt) {
  NumericTolerances tol;
  try {
    tol = parse_tolerances(opt.tolerance);
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  if (!opt.batch.empty()) {
    if (!fs::is_directory(opt.batch)) {
      std::cerr << "error: " << opt.batch << " is not a directory\n";
      return 2;
    }
    return run_batch(cmd, opt, tol);
  }
  if (opt.input.empty()) {
    std::cerr << "error: an input file or --batch is required\n";
    return 2;
  }
  const auto o = run_file(opt.input, cmd, opt, tol);
  (o.exit_code == 0 ? std::cout : std::cerr) << o.text;
  if (!opt.out.empty()) write_document(opt.out, o.document);
  return o.exit_code;
}

int generate(const Options &opt) {
  try {
    InstanceFile f;
    f.format = InstanceFormat::Recipe;
    f.recipe = parse_recipe(opt.recipe);
    f.seed = opt.seed;
    auto built = materialize(f);
    const auto text = to_json(built).dump(2);
    if (opt.out.empty()) std::cout << text << '\n';
    else write_document(opt.out, to_json(built));
    return 0;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Embedding and topology checks for intersections of real quadrics"};
  app.set_version_flag("--version", std::string(QUADLAG_VERSION));
  app.require_subcommand(1);
  Options opt;
  std::function<int()> action;

  auto file_command = [&](const char *name, const char *help, Command cmd) {
    auto *sub = app.add_subcommand(name, help);
    sub->add_option("file", opt.input, "instance file, - for stdin");
    sub->add_option("--out", opt.out, "write the structured report here (a directory with --batch)");
    sub->add_option("--tolerance", opt.tolerance, "override a numeric tolerance, key=value")->take_all();
    sub->add_option("--batch", opt.batch, "process every .json file in a directory");
    sub->callback([&, cmd] { action = [&, cmd] { return run(cmd, opt); }; });
    return sub;
  };
  auto add_sampling = [&](CLI::App *sub) {
    sub->add_option("--count", opt.count, "number of samples")->check(CLI::PositiveNumber);
    sub->add_option("--seed", opt.seed, "random seed");
  };

  file_command("check", "validate nondegeneracy or genericity", stage_command({Stage::Validate}));
  file_command("convert", "convert between quadric and polytope form", convert_command);
  file_command("delzant", "Delzant test on the polytope side", stage_command({Stage::Delzant}));
  file_command("embed", "embedding criterion on the quadric side", stage_command({Stage::Embed}));
  file_command("classify", "topology of R and N", stage_command({Stage::Classify}));
  file_command("isotropy", "isotropy group at a zero set", isotropy_command)
      ->add_option("--index-set", opt.index_set, "1-based indices, e.g. 1,2")
      ->required();
  add_sampling(file_command("sample", "sample points of R as a coordinate table", sample_command));
  add_sampling(file_command("verify-lagrangian", "numeric Lagrangian and immersion check",
                            stage_command({Stage::Sample})));
  auto *pipe = file_command("pipeline", "run several stages", [&](const InstanceFile &f, const Options &o,
                                                                 const NumericTolerances &t) {
    return pipeline_outcome(f, parse_stages(o.stages), o, t);
  });
  pipe->add_option("--stages", opt.stages, "comma-separated stages or all");
  add_sampling(pipe);

  auto *gen = app.add_subcommand("generate", "emit an instance file from a recipe");
  gen->add_option("--recipe", opt.recipe, "recipe text")->required();
  gen->add_option("--seed", opt.seed, "random seed");
  gen->add_option("--out", opt.out, "output path");
  gen->callback([&] { action = [&] { return generate(opt); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    return action();
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}
