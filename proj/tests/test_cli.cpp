#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <isingzero/version.hpp>

#ifndef ISINGZERO_CLI_PATH
#define ISINGZERO_CLI_PATH "../tools/isingzero"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string &args) {
  std::string out_path = "cli_test_stdout.tmp";
  std::string cmd = std::string(ISINGZERO_CLI_PATH) + " " + args + " > " +
                    out_path + " 2> cli_test_stderr.tmp";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  return r;
}

int count_lines_with(const std::string &text, const std::string &needle) {
  int n = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line.find(needle) != std::string::npos) ++n;
  return n;
}

} // namespace

TEST_CASE("params prints the critical angles") {
  auto r = run_cli("params --d 2 --b 2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("threshold 3") != std::string::npos);
  CHECK(r.out.find("regime sub-threshold") != std::string::npos);
  CHECK(r.out.find("lambda0_angle 2.0943951023932081") != std::string::npos);
  CHECK(r.out.find("lambda1_angle 2.32883709222113") != std::string::npos);
  CHECK(r.out.find("isingzero " + std::string(isingzero::version())) !=
        std::string::npos);
}

TEST_CASE("zeros jsonl: counts, determinism, reproducibility header") {
  auto r1 = run_cli("zeros --d 2 --b 2 --depth 3 --format jsonl");
  CHECK(r1.exit_code == 0);
  // one meta line + one line per distinct zero
  CHECK(r1.out.find("\"meta\"") != std::string::npos);
  CHECK(r1.out.find("config=") != std::string::npos);
  // depths 0..3 carry (2^1-1)+(2^2-1)+(2^3-1)+(2^4-1) = 26 zeros counted
  // with multiplicity; -1 is shared by all four depths and kept once
  long long mult_sum = 0;
  std::istringstream in(r1.out);
  std::string line;
  while (std::getline(in, line)) {
    auto pos = line.find("\"multiplicity\":");
    if (pos != std::string::npos)
      mult_sum += std::atoll(line.c_str() + pos + 15);
  }
  CHECK(mult_sum == 26 - 3);
  // byte-identical on repeat
  auto r2 = run_cli("zeros --d 2 --b 2 --depth 3 --format jsonl");
  CHECK(r1.out == r2.out);
}

TEST_CASE("zeros csv: header and column layout") {
  auto r = run_cli("zeros --d 2 --b 2 --depth 1 --format csv");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("lambda_re,lambda_im,class,depth,residual,on_circle,"
                   "multiplicity") != std::string::npos);
  CHECK(count_lines_with(r.out, ",cayley,") == 3); // 1 + 3 zeros, -1 shared
  // depth-1 real zero (-7-3*sqrt(5))/2 printed with 17 significant digits
  CHECK(r.out.find("-6.8541019662496847") != std::string::npos);
}

TEST_CASE("oracle: match on spherically symmetric trees, note otherwise") {
  {
    std::ofstream f("cli_star3.tmp");
    f << "3\n0 1\n0 2\n";
  }
  auto r = run_cli("oracle --tree cli_star3.tmp --b 2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("lambda^3 + 8*lambda^2 + 8*lambda + 1") !=
        std::string::npos);
  CHECK(r.out.find("MATCH recursion") != std::string::npos);

  {
    std::ofstream f("cli_asym4.tmp");
    f << "4\n0 1\n0 2\n1 3\n";
  }
  auto r2 = run_cli("oracle --tree cli_asym4.tmp --b 2");
  CHECK(r2.exit_code == 0);
  CHECK(r2.out.find("not spherically symmetric") != std::string::npos);
}

TEST_CASE("exit codes: domain errors 1, usage errors 2") {
  CHECK(run_cli("zeros --b 1.5").exit_code == 1);   // decimal b rejected
  CHECK(run_cli("zeros --b 0").exit_code == 1);     // invalid weight
  CHECK(run_cli("").exit_code == 2);                // missing subcommand
  CHECK(run_cli("nonsense").exit_code == 2);        // unknown subcommand
  CHECK(run_cli("params --d 2 --b 4").exit_code == 0); // super-threshold ok
}

TEST_CASE("figure emits two svgs with per-depth marker counts") {
  auto r = run_cli("figure --d 2 --b 2 --depth 3 --out cli_fig");
  CHECK(r.exit_code == 0);
  std::string cay = slurp("cli_fig_cayley.svg");
  std::string sph = slurp("cli_fig_spherical.svg");
  CHECK(cay.find("<svg") != std::string::npos);
  CHECK(sph.find("<svg") != std::string::npos);
  // markers carry their multiplicity; summed per depth they are 2^{n+1}-1
  long long mult_sum = 0;
  size_t pos = 0;
  while ((pos = cay.find("data-mult=\"", pos)) != std::string::npos) {
    pos += 11;
    mult_sum += std::atoll(cay.c_str() + pos);
  }
  CHECK(mult_sum == 1 + 3 + 7 + 15);
  // lambda0 and lambda1 marks, each with its conjugate
  CHECK(count_lines_with(cay, "data-kind=\"param\"") == 4);
}
