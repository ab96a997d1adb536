#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(FSCN_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (size_t got = fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

std::string tmp_file(const char* name) {
  return std::string("/tmp/fscn_cli_test_") + name;
}

}  // namespace

TEST_CASE("cdf command: square case routes to the closed form") {
  auto r = run_cli("cdf --m 2 --n 2 --p 2 --t 5");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("Corollary2") != std::string::npos);
  CHECK(r.output.find("0.0968075602035") != std::string::npos);
}

TEST_CASE("cdf command: m=1 value is one") {
  auto r = run_cli("cdf --m 1 --n 1 --p 1 --t 2");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find(",1,") != std::string::npos);
}

TEST_CASE("cdf command: t below one exits 2") {
  auto r = run_cli("cdf --m 2 --n 2 --p 2 --t 0.5");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("exceed 1") != std::string::npos);
}

TEST_CASE("cdf command: invalid dims exit 2 and name the precondition") {
  auto r = run_cli("cdf --m 3 --n 2 --p 3 --t 5");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("n >= m") != std::string::npos);
}

TEST_CASE("cdf command: method override and json format") {
  auto r = run_cli("cdf --m 2 --n 3 --p 3 --t 3 --method theorem1 --format json");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"method\": \"Theorem1\"") != std::string::npos);
  CHECK(r.output.find("0.0953947861990") != std::string::npos);
}

TEST_CASE("threshold command inverts the false alarm rate") {
  auto r = run_cli("threshold --m 2 --n 2 --p 2 --alpha 0.5");
  CHECK(r.exit_code == 0);
  // achieved_pf column should read back 0.5 to high accuracy
  CHECK(r.output.find("0.5") != std::string::npos);
  auto bad = run_cli("threshold --m 2 --n 2 --p 2 --alpha 1.5");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("roc command: gamma zero gives the diagonal") {
  auto r = run_cli("roc --m 2 --n 2 --p 2 --gamma 0 --alpha-grid 0.1,0.3");
  CHECK(r.exit_code == 0);
  std::istringstream is(r.output);
  std::string line;
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    REQUIRE(fields.size() >= 4);
    const double pf = std::stod(fields[2]), pd = std::stod(fields[3]);
    CHECK(pd == doctest::Approx(pf).epsilon(1e-6));
  }
}

TEST_CASE("simulate command is byte-identical across runs and thread counts") {
  const std::string f1 = tmp_file("sim1.csv"), f2 = tmp_file("sim2.csv");
  auto r1 = run_cli("simulate --mode cdf --m 2 --n 2 --p 2 --t 5 --draws 20000 --seed 7 "
                    "--threads 1 --out " + f1);
  auto r2 = run_cli("simulate --mode cdf --m 2 --n 2 --p 2 --t 5 --draws 20000 --seed 7 "
                    "--threads 2 --out " + f2);
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  const std::string a = slurp(f1), b = slurp(f2);
  CHECK(!a.empty());
  CHECK(a == b);
  std::remove(f1.c_str());
  std::remove(f2.c_str());
}

TEST_CASE("simulate cfar mode emits one row per covariance") {
  auto r = run_cli("simulate --mode cfar --m 2 --n 3 --p 3 --draws 2000 --covariances 3 --seed 3");
  CHECK(r.exit_code == 0);
  int lines = 0;
  for (char c : r.output)
    if (c == '\n') ++lines;
  CHECK(lines == 4);  // header + 3 rows
}

TEST_CASE("simulate robustness mode reports both statistics") {
  auto r = run_cli("simulate --mode robustness --m 2 --n 2 --p 3 --draws 2000 "
                   "--eps 0,0.3 --nominal 0.2 --seed 5");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("scn") != std::string::npos);
  CHECK(r.output.find("lambda_max") != std::string::npos);
}

TEST_CASE("plot script emission references the csv") {
  const std::string csv = tmp_file("roc.csv"), gp = tmp_file("roc.gp");
  auto r = run_cli("roc --m 2 --n 2 --p 2 --gamma 1 --alpha-grid 0.1,0.2 --out " + csv +
                   " --emit-plot-script " + gp);
  CHECK(r.exit_code == 0);
  const std::string script = slurp(gp);
  CHECK(script.find(csv) != std::string::npos);
  CHECK(script.find("plot") != std::string::npos);
  std::remove(csv.c_str());
  std::remove(gp.c_str());
}

TEST_CASE("validate --quick runs and the injected failure path exits 1") {
  auto r = run_cli("validate --quick --draws 2000");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("[PASS]") != std::string::npos);
  auto bad = run_cli("validate --quick --draws 2000 --inject-failure");
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("[FAIL]") != std::string::npos);
}

TEST_CASE("unknown flags exit 2") {
  auto r = run_cli("cdf --m 2 --n 2 --p 2 --t 5 --frobnicate");
  CHECK(r.exit_code == 2);
}
