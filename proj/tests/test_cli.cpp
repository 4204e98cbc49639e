#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hardyops/parse.hpp"

namespace fs = std::filesystem;
using namespace hardyops;

namespace {

struct ToolResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const char* tool_path() {
  const char* p = std::getenv("HARDYOPS_TOOL");
  REQUIRE(p != nullptr);
  return p;
}

int run_count = 0;

/// Runs the CLI with `args`, capturing exit code and both streams.  `env`
/// prefixes the command (e.g. "HARDYOPS_SEED=5").
ToolResult run_tool(const std::string& args, const std::string& env = "") {
  fs::path dir = fs::temp_directory_path() /
                 ("hardyops_cli_" + std::to_string(::getpid()) + "_" +
                  std::to_string(run_count++));
  fs::create_directories(dir);
  fs::path out = dir / "out.txt";
  fs::path err = dir / "err.txt";
  std::string cmd = env.empty() ? "" : env + " ";
  cmd += std::string("'") + tool_path() + "' " + args + " > '" + out.string() +
         "' 2> '" + err.string() + "'";
  int rc = std::system(cmd.c_str());
  ToolResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() /
                 ("hardyops_dir_" + std::to_string(::getpid()) + "_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string seed_field(const std::string& json) {
  size_t pos = json.find("\"seed\":");
  REQUIRE(pos != std::string::npos);
  size_t end = json.find_first_of(",}\n", pos);
  return json.substr(pos, end - pos);
}

}  // namespace

TEST_CASE("assemble writes a matrix and its sidecar") {
  fs::path dir = fresh_dir("asm_rto");
  ToolResult r = run_tool(
      "assemble --kind rto --phi \"laurent: -1:1\" --eta \"blaschke: 0\" "
      "--theta \"blaschke: 0,0\" -N 50 --output-dir '" +
      dir.string() + "'");
  CAPTURE(r.err);
  REQUIRE(r.exit_code == 0);
  REQUIRE(fs::exists(dir / "rto.csv"));
  REQUIRE(fs::exists(dir / "rto.json"));
  REQUIRE(r.out.find("\"rows\": 2") != std::string::npos);
  REQUIRE(r.out.find("\"cols\": 50") != std::string::npos);
  // machine output on stdout parses as JSON-ish sidecar, summary on stderr
  REQUIRE(r.err.find("assembled rto") != std::string::npos);
}

TEST_CASE("assemble handles rational symbols and block operators") {
  fs::path dir = fresh_dir("asm_stto");
  ToolResult r = run_tool(
      "assemble --kind stto --phi \"rational: (1)/(z-2)\" "
      "--theta \"blaschke: 0.5\" -N 100 --output-dir '" +
      dir.string() + "'");
  CAPTURE(r.err);
  REQUIRE(r.exit_code == 0);
  REQUIRE(fs::exists(dir / "stto.csv"));
  REQUIRE(fs::exists(dir / "stto.json"));
}

TEST_CASE("usage errors exit with code 2") {
  REQUIRE(run_tool("assemble --kind frobnicate --phi \"laurent: 0:1\"")
              .exit_code == 2);
  REQUIRE(run_tool("assemble --kind rto --phi \"laurent: nonsense\" "
                   "--theta \"blaschke: 0,0\"")
              .exit_code == 2);
  REQUIRE(run_tool("verify --suite projections -N 3").exit_code == 2);
  REQUIRE(run_tool("verify --suite nonsense").exit_code == 2);
  REQUIRE(run_tool("verify").exit_code == 2);
  REQUIRE(run_tool("verify --suite defects --tol-identity 0.5").exit_code ==
          2);
}

TEST_CASE("verify projections passes at the acceptance size") {
  fs::path dir = fresh_dir("verify_proj");
  ToolResult r = run_tool("verify --suite projections -N 200 --seed 7 "
                          "--output-dir '" +
                          dir.string() + "'");
  CAPTURE(r.err);
  REQUIRE(r.exit_code == 0);
  REQUIRE(fs::exists(dir / "verify_projections.json"));
  REQUIRE(r.out.find("\"verdict\": \"PASS\"") != std::string::npos);
  REQUIRE(r.err.find("projections:") != std::string::npos);
}

TEST_CASE("verify output is byte-identical across runs and thread counts") {
  fs::path d1 = fresh_dir("det1");
  fs::path d2 = fresh_dir("det2");
  std::string base = "verify --suite all -N 48 --seed 11 ";
  ToolResult r1 =
      run_tool(base + "--jobs 1 --output-dir '" + d1.string() + "'");
  ToolResult r2 =
      run_tool(base + "--jobs 3 --output-dir '" + d2.string() + "'");
  CAPTURE(r1.err, r2.err);
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r2.exit_code == 0);
  std::string j1 = slurp(d1 / "verify_all.json");
  std::string j2 = slurp(d2 / "verify_all.json");
  REQUIRE_FALSE(j1.empty());
  REQUIRE(j1 == j2);
  REQUIRE(r1.out == r2.out);
}

TEST_CASE("tolerances below the noise floor fail loudly") {
  fs::path dir = fresh_dir("tight");
  ToolResult r = run_tool(
      "verify --suite defects -N 48 --seed 3 --tol-identity 1e-15 "
      "--output-dir '" +
      dir.string() + "'");
  REQUIRE(r.exit_code == 1);
  REQUIRE(r.out.find("\"verdict\": \"FAIL\"") != std::string::npos);
  REQUIRE(r.out.find("\"residual\":") != std::string::npos);
}

TEST_CASE("seed precedence: flags beat config beats environment") {
  fs::path dir = fresh_dir("seeds");
  std::string base = "verify --suite projections -N 32 --output-dir '" +
                     dir.string() + "' ";

  ToolResult flag = run_tool(base + "--seed 5");
  ToolResult env = run_tool(base, "HARDYOPS_SEED=5");
  REQUIRE(flag.exit_code == 0);
  REQUIRE(env.exit_code == 0);
  REQUIRE(flag.out == env.out);
  REQUIRE(seed_field(flag.out) == "\"seed\": 5");

  ToolResult both = run_tool(base + "--seed 9", "HARDYOPS_SEED=5");
  REQUIRE(seed_field(both.out) == "\"seed\": 9");

  fs::path cfg = dir / "run.cfg";
  std::ofstream(cfg) << "# sample config\nseed=13\nN=32\n";
  ToolResult file = run_tool(
      "verify --suite projections --config '" + cfg.string() +
      "' --output-dir '" + dir.string() + "'");
  REQUIRE(seed_field(file.out) == "\"seed\": 13");

  ToolResult file_env = run_tool(
      "verify --suite projections --config '" + cfg.string() +
          "' --output-dir '" + dir.string() + "'",
      "HARDYOPS_SEED=5");
  REQUIRE(seed_field(file_env.out) == "\"seed\": 13");

  ToolResult file_flag = run_tool(
      "verify --suite projections --config '" + cfg.string() +
      "' --seed 21 --output-dir '" + dir.string() + "'");
  REQUIRE(seed_field(file_flag.out) == "\"seed\": 21");
}

TEST_CASE("config files configure everything flags do") {
  fs::path dir = fresh_dir("cfg");
  fs::path cfg = dir / "run.cfg";
  std::ofstream(cfg) << "N=40\ninternal_expansion_factor=4\n"
                     << "tol_identity=1e-8\nseed=2\nformat=csv\n"
                     << "output_dir=" << dir.string() << "\n";
  ToolResult r = run_tool("verify --suite projections --config '" +
                          cfg.string() + "'");
  CAPTURE(r.err);
  REQUIRE(r.exit_code == 0);
  REQUIRE(fs::exists(dir / "verify_projections.csv"));
  std::string csv = slurp(dir / "verify_projections.csv");
  REQUIRE(csv.rfind("check_id,identity,residual", 0) == 0);

  std::ofstream(dir / "bad.cfg") << "no_such_key=1\n";
  REQUIRE(run_tool("verify --suite projections --config '" +
                   (dir / "bad.cfg").string() + "'")
              .exit_code == 2);
}

TEST_CASE("study reports a verdict for a finite Blaschke symbol") {
  fs::path dir = fresh_dir("study");
  ToolResult r = run_tool(
      "study --kind rho --phi \"rational: (1)/(z-0.4)\" "
      "--eta \"blaschke: 0\" --theta \"blaschke: 0.5,-0.3\" "
      "--windows 8,16,24 --output-dir '" +
      dir.string() + "'");
  CAPTURE(r.err);
  REQUIRE(r.exit_code == 0);
  REQUIRE(fs::exists(dir / "study_rho.csv"));
  std::string csv = slurp(dir / "study_rho.csv");
  REQUIRE(csv.rfind("window,rank", 0) == 0);
  REQUIRE(csv.find("verdict,PLATEAU") != std::string::npos);
  REQUIRE(r.err.find("verdict PLATEAU") != std::string::npos);

  REQUIRE(run_tool("study --kind rho --phi \"laurent: 0:1\" "
                   "--theta \"blaschke: 0.5\" --windows 16,8")
              .exit_code == 2);
}

TEST_CASE("symbol grammar round-trips through the parser") {
  ParsedSymbol lau = parse_symbol("laurent: -2:1,0,3+2i,0,1", 64);
  REQUIRE(lau.series.at(-2) == cd(1.0));
  REQUIRE(lau.series.at(0) == cd(3.0, 2.0));
  REQUIRE(lau.series.at(2) == cd(1.0));
  REQUIRE(lau.rational.has_value());
  cd z = std::polar(1.0, 0.9);
  cd direct = std::pow(z, -2) + cd(3.0, 2.0) + z * z;
  REQUIRE(std::abs(lau.eval(z) - direct) < 1e-13);
  REQUIRE(std::abs(lau.rational->eval(z) - direct) < 1e-13);

  ParsedSymbol rat = parse_symbol("rational: (z-0.5)/(1-0.5*z)", 64);
  REQUIRE(std::abs(rat.series.at(0) - cd(-0.5)) < 1e-14);
  REQUIRE(std::abs(rat.series.at(1) - cd(0.75)) < 1e-14);

  InnerFunction trivial = parse_inner("");
  REQUIRE(trivial.is_constant());
  InnerFunction b = parse_inner("blaschke: 0.5, -0.2+0.1i");
  REQUIRE(b.degree() == 2);
  InnerFunction atom = parse_inner("blaschke: 0.5 atom@0.0:1.0");
  REQUIRE(atom.has_atoms());
  REQUIRE(atom.degree() == 1);
  REQUIRE(parse_inner("blaschke: 0.5, atom@0.0:1.0") == atom);

  REQUIRE_THROWS_AS(parse_symbol("laurent: x", 64), ParseError);
  REQUIRE_THROWS_AS(parse_symbol("rational: (1)/(z-1)", 64), ParseError);
  REQUIRE_THROWS_AS(parse_inner("blaschke: 1.5"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_symbol("mystery: 1", 64), ParseError);
}
