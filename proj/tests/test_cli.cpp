#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = KZK_CLI;
const fs::path kConfigs = KZK_CONFIG_DIR;

struct Result {
  int code = -1;
  std::string out;
};

/// Runs the CLI inside `dir` with KZK_OUTPUT_ROOT pointing there.
Result cli(const std::string& args, const fs::path& dir) {
  const std::string cmd = "cd '" + dir.string() + "' && KZK_OUTPUT_ROOT='" + dir.string() + "' '" + kCli + "' " +
                          args + " 2>&1";
  Result r;
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), p)) r.out += buf.data();
  const int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("kzk_test_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

bool empty_dir(const fs::path& d) { return fs::directory_iterator(d) == fs::directory_iterator(); }

} // namespace

TEST_CASE("usage errors") {
  const fs::path d = scratch("usage");
  CHECK(cli("", d).code == 64);
  const Result bogus = cli("bogus", d);
  CHECK(bogus.code == 64);
  CHECK(bogus.out.find("unknown subcommand") != std::string::npos);
  CHECK(cli("eigen-table --no-such-flag", d).code == 64);
  CHECK(cli("validate", d).code == 64);
  CHECK(cli("--help", d).code == 0);
}

TEST_CASE("validate writes nothing") {
  const fs::path d = scratch("validate");
  const Result ok = cli("validate '" + (kConfigs / "baseline.cfg").string() + "'", d);
  CHECK(ok.code == 0);
  CHECK(ok.out.find("valid") != std::string::npos);
  CHECK(empty_dir(d));

  const Result bad = cli("validate '" + (kConfigs / "decay_gate_reject.cfg").string() + "'", d);
  CHECK(bad.code == 1);
  CHECK(bad.out.find("L0") != std::string::npos);
  CHECK(empty_dir(d));

  CHECK(cli("validate missing.cfg", d).code == 1);
}

TEST_CASE("experiments refused by a gate exit with 1") {
  const fs::path d = scratch("gate");
  const Result r = cli("experiment '" + (kConfigs / "decay_gate_reject.cfg").string() + "'", d);
  CHECK(r.code == 1);
  CHECK(r.out.find("violation") != std::string::npos);
}

TEST_CASE("eigen table") {
  const fs::path d = scratch("eigen");
  const Result r = cli("eigen-table --family a --L 3.141592653589793 --count 3", d);
  CHECK(r.code == 0);
  CHECK(r.out == "l,lambda\n1,1\n2,4\n3,9\n");
  const Result c = cli("eigen-table --family c --L 1 --count 1", d);
  CHECK(c.out.rfind("l,lambda\n1,2.46740110027", 0) == 0);
  CHECK(cli("eigen-table --family q", d).code == 2);
}

TEST_CASE("run writes records, the final field and metadata") {
  const fs::path d = scratch("run");
  std::ofstream(d / "small.cfg") << "[equation]\nnonlinearity = quadratic\n[domain]\nX_max = 10\n"
                                    "[discretization]\nnx = 101\nny_modes = 4\ndt = 0.01\nT = 0.1\n"
                                    "[initial]\nkind = gaussian\namplitude = 0.1\nx0 = 5\nsigma = 1\n"
                                    "[weight:e]\nkind = exp\nalpha = 0.1\n"
                                    "[diagnostics]\nrecord_every = 5\nlambda_plus = u_y\n[output]\ndir = res\n";
  const Result r = cli("run small.cfg", d);
  CHECK(r.code == 0);
  CHECK(fs::exists(d / "res" / "records.csv"));
  CHECK(fs::exists(d / "res" / "final_field.csv"));
  CHECK(fs::exists(d / "res" / "metadata.txt"));
  std::ifstream in(d / "res" / "records.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "# columns=t;mass;weighted_mass:e;h1_energy;mu2_norm;lambda_plus:u_y");
}

TEST_CASE("oracle and inequality reports") {
  const fs::path d = scratch("reports");
  const Result o = cli("oracle --X 40 --nx 256 --modes 2 --x0 20 --t 0.1 --out field.csv", d);
  CHECK(o.code == 0);
  CHECK(fs::exists(d / "field.csv"));
  const Result tail = cli("oracle --X 40 --nx 256 --modes 2 --x0 1 --t 0.1 --out edge.csv", d);
  CHECK(tail.code == 1);
  CHECK(tail.out.find("horizon too long") != std::string::npos);

  const Result i = cli("inequalities --size 4 --out ineq.csv", d);
  CHECK(i.code == 0);
  CHECK(i.out.rfind("lemma,parameters,constant,pass\n", 0) == 0);
  CHECK(fs::exists(d / "ineq.csv"));
}
