#include <gtest/gtest.h>

#include <quadlag/pipeline.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace quadlag;
namespace fs = std::filesystem;

namespace {

const std::string data = QUADLAG_DATA_DIR;

int run(const std::string &args) {
  const std::string cmd = std::string(QUADLAG_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Json read_json(const fs::path &p) {
  std::ifstream in(p);
  return Json::parse(in);
}

fs::path scratch(const std::string &name) {
  auto dir = fs::temp_directory_path() / ("quadlag_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

} // namespace

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("pipeline " + data + "/pentagon.json"), 0);
  EXPECT_EQ(run("pipeline " + data + "/unequal_weights.json --stages validate,embed"), 1);
  EXPECT_EQ(run("check " + data + "/degenerate.json"), 1);
  EXPECT_EQ(run("delzant " + data + "/non_delzant.json"), 1);
  EXPECT_EQ(run("check " + data + "/does_not_exist.json"), 2);
  EXPECT_EQ(run("pipeline " + data + "/pentagon.json --stages nonsense"), 2);
  EXPECT_EQ(run("pipeline " + data + "/pentagon.json --tolerance nonsense"), 2);
  EXPECT_EQ(run("isotropy " + data + "/unequal_weights.json --index-set 1,7"), 2);
  EXPECT_EQ(run("generate --recipe 'cube(0)'"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
}

TEST(Cli, MalformedFileExitsTwo) {
  const auto bad = scratch("malformed.json");
  std::ofstream(bad) << R"j({"format":"quadrics","gamma":[["1","1/0"]],"c":["1"]})j";
  EXPECT_EQ(run("check " + bad.string()), 2);
  std::ofstream(bad) << "{ not json";
  EXPECT_EQ(run("check " + bad.string()), 2);
}

TEST(Cli, ReportFileRoundTrips) {
  const auto out = scratch("pentagon.report.json");
  ASSERT_EQ(run("pipeline " + data + "/pentagon.json --out " + out.string()), 0);
  const auto doc = report_from_json(read_json(out));
  EXPECT_EQ(doc.exit_code, 0);
  EXPECT_EQ(doc, run_pipeline(parse_instance_text(read_json(data + "/pentagon.json").dump())));
}

TEST(Cli, IsotropyReport) {
  const auto out = scratch("isotropy.json");
  ASSERT_EQ(run("isotropy " + data + "/unequal_weights.json --index-set 1,2 --out " + out.string()), 0);
  const auto j = read_json(out);
  EXPECT_EQ(j["isotropy"]["description"], "Z/2");
  EXPECT_EQ(j["lattice_index"], "2");
}

TEST(Cli, GenerateEmitsInstance) {
  const auto out = scratch("random.json");
  ASSERT_EQ(run("generate --recipe 'random(5,2,3)' --seed 1 --out " + out.string()), 0);
  const auto f = instance_from_json(read_json(out));
  ASSERT_TRUE(f.system);
  EXPECT_EQ(*f.system, random_system(5, 2, 1, 3).system);
  ASSERT_EQ(run("generate --recipe 'product(simplex(1),simplex(1))' --out " + out.string()), 0);
  EXPECT_EQ(*instance_from_json(read_json(out)).presentation, cube(2));
}

TEST(Cli, ConvertRoundTrip) {
  const auto q = scratch("pentagon.quadrics.json");
  const auto p = scratch("pentagon.polytope.json");
  ASSERT_EQ(run("convert " + data + "/pentagon.json --out " + q.string()), 0);
  ASSERT_EQ(run("convert " + q.string() + " --out " + p.string()), 0);
  const auto back = *instance_from_json(read_json(p)).presentation;
  EXPECT_TRUE(check_generic(back).generic);
  EXPECT_EQ(to_quadrics(back).m(), 5u);
}

TEST(Cli, BatchWritesOneReportPerFile) {
  const auto dir = scratch("batch");
  fs::remove_all(dir);
  fs::create_directories(dir / "in");
  for (const char *name : {"pentagon.json", "degenerate.json", "sphere.json"})
    fs::copy_file(data + "/" + name, dir / "in" / name);
  EXPECT_EQ(run("pipeline --batch " + (dir / "in").string() + " --out " + (dir / "out").string()), 1);
  EXPECT_EQ(read_json(dir / "out" / "pentagon.report.json")["exit_code"], 0);
  EXPECT_EQ(read_json(dir / "out" / "degenerate.report.json")["exit_code"], 1);
  EXPECT_EQ(read_json(dir / "out" / "sphere.report.json")["exit_code"], 0);
}

TEST(Cli, SampleTable) {
  const auto out = scratch("samples.txt");
  const std::string cmd =
      std::string(QUADLAG_CLI) + " sample " + data + "/sphere.json --count 7 --seed 3 > " + out.string();
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  std::ifstream in(out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "u1 u2 u3 residual");
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    double u1, u2, u3, r;
    ASSERT_TRUE(ss >> u1 >> u2 >> u3 >> r);
    EXPECT_NEAR(u1 * u1 + u2 * u2 + u3 * u3, 1.0, 1e-12);
    ++rows;
  }
  EXPECT_EQ(rows, 7);
}
