// Drives the command-line binary and checks the exit-status contract:
// 0 success, 1 input error, 2 inconclusive / no certificate, 3 inside hull.

#include "quadagg/catalog.hpp"
#include "quadagg/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int failures = 0;
std::string binary;
std::string instances;
std::filesystem::path workdir;

int run(const std::string& args) {
  const std::string cmd = binary + " " + args + " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WEXITSTATUS(raw);
}

void expect(const std::string& what, int got, int want) {
  const bool ok = got == want;
  if (!ok) ++failures;
  std::printf("%s cli %s: exit %d (want %d)\n", ok ? "PASS" : "FAIL", what.c_str(), got, want);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: cli_exitcodes <quadagg-binary> <instances-dir>\n");
    return 2;
  }
  binary = argv[1];
  instances = argv[2];
  workdir = std::filesystem::temp_directory_path() / "quadagg_cli_test";
  std::filesystem::remove_all(workdir);
  std::filesystem::create_directories(workdir);
  const std::string out = " --out " + (workdir / "out").string();

  expect("pdlc on the first worked example",
         run("pdlc --instance " + instances + "/example1-open.json" + out), 0);
  {
    const bool wrote = std::filesystem::exists(workdir / "out" / "pdlc_certificate.json") &&
                       slurp(workdir / "out" / "pdlc_certificate.json").find("pdlc-witness") !=
                           std::string::npos;
    if (!wrote) ++failures;
    std::printf("%s cli pdlc writes the witness certificate file\n", wrote ? "PASS" : "FAIL");
  }
  expect("pdlc finds the dual witness on the infinite-aggregation instance",
         run("pdlc --instance " + instances + "/infinite-agg.json" + out), 0);
  {
    const bool wrote = slurp(workdir / "out" / "pdlc_certificate.json").find("dual-witness") !=
                       std::string::npos;
    if (!wrote) ++failures;
    std::printf("%s cli pdlc writes the dual-witness file\n", wrote ? "PASS" : "FAIL");
  }

  {
    const auto truncated = workdir / "truncated.json";
    std::ofstream f(truncated);
    f << "{\"n\": 3, \"sense\": \"strict\"";
  }
  expect("pdlc on a truncated file",
         run("pdlc --instance " + (workdir / "truncated.json").string() + out), 1);
  expect("pdlc on a missing file", run("pdlc --instance /nonexistent.json" + out), 1);

  expect("separate an outside point",
         run("separate --instance " + instances + "/example1-open.json --point 2,0,0 "
             "--samples 300000" + out),
         0);
  expect("separate an inside point",
         run("separate --instance " + instances + "/example1-open.json --point -1.2,0,0 "
             "--samples 300000" + out),
         3);
  expect("separate with a malformed point",
         run("separate --instance " + instances + "/example1-open.json --point 1,2" + out), 1);

  expect("exclude on the four-constraint counterexample",
         run("exclude --instance " + instances + "/fourquad.json --point 10,-5,-5 "
             "--keep 1.207,-0.02925,-0.02925" + out),
         2);
  {
    const bool wrote = slurp(workdir / "out" / "exclusion_farkas.json").find("\"farkas\"") !=
                       std::string::npos;
    if (!wrote) ++failures;
    std::printf("%s cli exclude writes the farkas certificate file\n", wrote ? "PASS" : "FAIL");
  }
  expect("exclude with a separable pair",
         run("exclude --instance " + instances + "/example1-open.json --point 2,0,0 "
             "--keep 1.2,0,0" + out),
         0);

  expect("reproduce the diagonal demo", run("reproduce slemma-diag" + out), 0);
  expect("reproduce an unknown id", run("reproduce nope" + out), 1);

  // identical config + seed => byte-identical output files
  {
    const auto dirA = workdir / "cloudA";
    const auto dirB = workdir / "cloudB";
    const std::string base = "plot-data --instance " + instances +
                             "/example1-open.json --samples 50000 --seed 99 --lambda 0,1,1";
    expect("plot-data first run", run(base + " --out " + dirA.string()), 0);
    expect("plot-data second run", run(base + " --out " + dirB.string()), 0);
    const bool identical = slurp(dirA / "S_cloud.txt") == slurp(dirB / "S_cloud.txt") &&
                           slurp(dirA / "S_lambda_0_cloud.txt") ==
                               slurp(dirB / "S_lambda_0_cloud.txt") &&
                           !slurp(dirA / "S_cloud.txt").empty();
    if (!identical) ++failures;
    std::printf("%s cli plot-data determinism\n", identical ? "PASS" : "FAIL");
  }

  // the shipped instance files agree with the built-in constants bit for bit
  for (const auto& id : quadagg::kInstanceIds) {
    const quadagg::QuadSystem fromFile =
        quadagg::load_quad_system(std::filesystem::path(instances) / (id + ".json"));
    const quadagg::QuadSystem builtin = quadagg::load_instance(id).system;
    bool same = fromFile.n == builtin.n && fromFile.m() == builtin.m() &&
                fromFile.sense() == builtin.sense();
    for (int i = 0; same && i < builtin.m(); ++i) {
      same = fromFile.constraints[i].A.mat() == builtin.constraints[i].A.mat() &&
             fromFile.constraints[i].b == builtin.constraints[i].b &&
             fromFile.constraints[i].c == builtin.constraints[i].c;
    }
    if (!same) ++failures;
    std::printf("%s instance file %s matches the built-in constants\n", same ? "PASS" : "FAIL",
                id.c_str());
  }

  std::filesystem::remove_all(workdir);
  if (failures) std::printf("%d cli checks failed\n", failures);
  return failures;
}
