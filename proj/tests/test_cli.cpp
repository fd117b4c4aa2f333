#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, bool merge_stderr = false) {
  const std::string command =
      std::string(QLIN_CLI_PATH) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buffer[4096];
  std::size_t got;
  while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) result.out.append(buffer, got);
  const int raw = pclose(pipe);
  result.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return result;
}

std::string fixture(const std::string& name) {
  return std::string(QLIN_FIXTURE_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/qlin_cli_" + name;
  std::ofstream out(path);
  REQUIRE(out);
  out << content;
  return path;
}

long count_lines(const std::string& text) {
  long lines = 0;
  for (char ch : text) lines += ch == '\n';
  return lines;
}

}  // namespace

TEST_CASE("divide: representable quotient") {
  const RunResult r = run_cli("divide --m 1 --y 0.75");
  CHECK(r.status == 0);
  CHECK(r.out.find("x = 0.75\n") != std::string::npos);
  CHECK(r.out.find("bits = 0111") != std::string::npos);
  CHECK(r.out.find("scaled energy = -1.53125") != std::string::npos);
  CHECK(r.out.find("solver = brute") != std::string::npos);
}

TEST_CASE("divide: zero dividend") {
  const RunResult r = run_cli("divide --m 1 --y 0");
  CHECK(r.status == 0);
  CHECK(r.out.find("x = 0\n") != std::string::npos);
}

TEST_CASE("divide: iterated refinement of 0.3 / 0.9") {
  const RunResult r = run_cli("divide --m 0.9 --y 0.3 --iterate --tol 1e-6");
  CHECK(r.status == 0);
  CHECK(r.out.find("x = 0.33333") != std::string::npos);
  CHECK(r.out.find("iterations = 10") != std::string::npos);
  CHECK(r.out.find("converged = yes") != std::string::npos);
}

TEST_CASE("divide: iteration cap exhausts into a solver failure") {
  const RunResult r = run_cli("divide --m 1 --y 0.9 --iterate --tol 1e-13 --max-iter 1");
  CHECK(r.status == 3);
  CHECK(r.out.find("converged = no") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run_cli("divide --y 1").status == 2);                       // missing --m
  CHECK(run_cli("divide --m 1 --y 1 --solver quantum").status == 2);
  CHECK(run_cli("frobnicate").status == 2);
  CHECK(run_cli("solve /nonexistent.prob").status == 2);
  CHECK(run_cli("").status == 2);  // a subcommand is required
}

TEST_CASE("solve: symmetric fixture by brute force") {
  const RunResult r = run_cli("solve " + fixture("1a.prob"));
  CHECK(r.status == 0);
  CHECK(r.out.find("x = (-0.25, 0.75)") != std::string::npos);
  CHECK(r.out.find("residual norm = 0\n") != std::string::npos);
  CHECK(r.out.find("bits = 00110111") != std::string::npos);
}

TEST_CASE("solve: identity with zero right-hand side") {
  const std::string path = write_temp("identity.prob", "2 4\n1 0\n0 1\n0 0\n");
  const RunResult r = run_cli("solve " + path);
  CHECK(r.status == 0);
  CHECK(r.out.find("x = (0, 0)") != std::string::npos);
}

TEST_CASE("solve: singular matrix exits with 4") {
  const std::string path = write_temp("singular.prob", "2 4\n1 2\n2 4\n1 2\n");
  CHECK(run_cli("solve " + path).status == 4);
}

TEST_CASE("invert: identity and a grid-representable inverse") {
  const std::string identity = write_temp("identity.mat", "2 4\n1 0\n0 1\n");
  const RunResult r = run_cli("invert " + identity);
  CHECK(r.status == 0);
  CHECK(r.out.find("1 0\n0 1\n") != std::string::npos);

  const std::string mixed = write_temp("mixed.mat", "2 4\n1 0.5\n1 -0.5\n");
  const RunResult inverse = run_cli("invert " + mixed);
  CHECK(inverse.status == 0);
  CHECK(inverse.out.find("0.5 0.5\n1 -1\n") != std::string::npos);
}

TEST_CASE("invert: singular matrix exits with 4") {
  const std::string path = write_temp("singular.mat", "2 4\n1 2\n2 4\n");
  CHECK(run_cli("invert " + path).status == 4);
}

TEST_CASE("landscape: 256-row CSV on stdout") {
  const RunResult r = run_cli("landscape " + fixture("1i.prob"));
  CHECK(r.status == 0);
  CHECK(r.out.rfind("gray_index,bits,energy\n", 0) == 0);
  CHECK(count_lines(r.out) == 257);
}

TEST_CASE("landscape: --out writes the CSV plus a manifest, byte-reproducibly") {
  const std::string csv_path = "/tmp/qlin_cli_landscape.csv";
  const RunResult first = run_cli("landscape " + fixture("1j.prob") + " --out " + csv_path);
  CHECK(first.status == 0);
  const std::string csv_once = slurp(csv_path);
  const std::string manifest_once = slurp(csv_path + ".manifest.json");
  CHECK(count_lines(csv_once) == 257);
  CHECK(manifest_once.find("\"subcommand\": \"landscape\"") != std::string::npos);
  CHECK(manifest_once.find("\"input_fnv1a\"") != std::string::npos);

  const RunResult second = run_cli("landscape " + fixture("1j.prob") + " --out " + csv_path);
  CHECK(second.status == 0);
  CHECK(slurp(csv_path) == csv_once);
  CHECK(slurp(csv_path + ".manifest.json") == manifest_once);
  CHECK(first.out == second.out);
}

TEST_CASE("spectrum: counter-term ladder of a three-qubit chain") {
  const RunResult r = run_cli("spectrum --chain 3 --alpha 3.0");
  CHECK(r.status == 0);
  CHECK(r.out.find("bits,energy\n") != std::string::npos);
  CHECK(r.out.find("000,0\n") != std::string::npos);
  CHECK(r.out.find("011,2\n") != std::string::npos);
  CHECK(r.out.find("101,8\n") != std::string::npos);
  CHECK(r.out.find("111,0\n") != std::string::npos);
}

TEST_CASE("embed-info: complete graph on four variables") {
  const RunResult r = run_cli("embed-info --k 4");
  CHECK(r.status == 0);
  CHECK(r.out.find("L0: 4\n") != std::string::npos);
  CHECK(r.out.find("L2: 0 5\n") != std::string::npos);
  CHECK(r.out.find("L3: 2 7\n") != std::string::npos);
  CHECK(r.out.find("max chain length = 2") != std::string::npos);
  CHECK(r.out.find("verified = yes") != std::string::npos);
}

TEST_CASE("environment overrides with the QL_ prefix") {
  setenv("QL_R", "3", 1);
  const RunResult r = run_cli("divide --m 1 --y 0.75");
  unsetenv("QL_R");
  CHECK(r.status == 0);
  CHECK(r.out.find("bits = 011\n") != std::string::npos);  // three bits, not four
}

TEST_CASE("solve: weak chains on the ill-conditioned 3x3 exit with 5") {
  // Couplings near 500 dwarf a penalty of 20: every read breaks.
  const RunResult r = run_cli(
      "solve " + fixture("2f.prob") + " --solver sa --alpha 20 --reads 100 --seed 5", true);
  CHECK(r.status == 5);
  CHECK(r.out.find("broken chains") != std::string::npos);
}

TEST_CASE("fixed seed reproduces the sampled report") {
  const std::string args = "solve " + fixture("1g.prob") +
                           " --solver sa --reads 25 --sweeps 200 --seed 77";
  const RunResult first = run_cli(args);
  const RunResult second = run_cli(args);
  CHECK(first.status == second.status);
  CHECK(first.out == second.out);
  CHECK(first.out.find("chain-break fraction") != std::string::npos);
}
