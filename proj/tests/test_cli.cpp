#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cnsieve/report.hpp"

// End-to-end tests driving the installed binary. CNSIEVE_BIN is injected by
// the build so the suite always runs the executable it was built alongside.

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(CNSIEVE_BIN) + " " + args + " 2>/dev/null";
  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buffer[4096];
  size_t got = 0;
  while ((got = fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
    result.out.append(buffer, got);
  }
  const int status = pclose(pipe);
  REQUIRE(WIFEXITED(status));
  result.exit_code = WEXITSTATUS(status);
  return result;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("primes subcommand") {
  CHECK(run_cli("primes --limit 10000").out == "1229\n");
  CHECK(run_cli("primes --limit 541 --nth 100").out == "541\n");

  const RunResult list = run_cli("primes --limit 30 --list");
  CHECK(list.exit_code == 0);
  CHECK(list.out == "2 3 5 7 11 13 17 19 23 29\n");

  // independent counting method cross-check
  CHECK(run_cli("primes --limit 100000 --verify-oracle").exit_code == 0);
}

TEST_CASE("sieve subcommand lists survivors") {
  CHECK(run_cli("sieve --pattern twin --limit 100 --list").out ==
        "4 6 12 18 30 42 60 72\n");
  CHECK(run_cli("sieve --pattern gap:3 --limit 30 --list").out == "8 10 14 16 20 26\n");
  CHECK(run_cli("sieve --pattern twin --limit 2000 --verify-oracle --verify-limit 2000")
            .exit_code == 0);
}

TEST_CASE("sieve json output carries the survivor list") {
  const RunResult result = run_cli("sieve --pattern sg --limit 50 --list --format json");
  REQUIRE(result.exit_code == 0);
  const nlohmann::json doc = nlohmann::json::parse(result.out);
  CHECK(doc.at("bound").get<uint64_t>() == 50);
  CHECK(doc.at("kind").get<std::string>() == "sg");
  REQUIRE(doc.at("patterns").size() == 1);
  const nlohmann::json& pat = doc.at("patterns").at(0);
  CHECK(pat.at("effective_limit").get<uint64_t>() == 119);
  CHECK(pat.at("survivors").get<std::vector<uint64_t>>() ==
        std::vector<uint64_t>{4, 6, 10, 22, 46});
}

TEST_CASE("compare output parses with the library reader") {
  const RunResult result = run_cli("compare --pattern twin --x-values 1000,10000");
  REQUIRE(result.exit_code == 0);
  const std::vector<cnsieve::ComparisonRow> rows = cnsieve::parse_csv(result.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].x == 1000);
  CHECK(rows[0].empirical == 35);
  CHECK(rows[1].x == 10000);
  CHECK(rows[1].empirical == 205);
  CHECK(rows[1].mode == "paper");

  // deterministic output: a second identical invocation is byte-identical
  CHECK(run_cli("compare --pattern twin --x-values 1000,10000").out == result.out);
}

TEST_CASE("meta flag prefixes a comment the reader tolerates") {
  const RunResult result = run_cli("compare --pattern twin --x-values 1000,10000 --meta");
  REQUIRE(result.exit_code == 0);
  CHECK(result.out.rfind("# generated ", 0) == 0);
  CHECK(cnsieve::parse_csv(result.out).size() == 2);
}

TEST_CASE("out flag writes the same bytes to a file") {
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "cnsieve_cli_test_out.csv";
  std::filesystem::remove(path);
  const std::string args = "compare --pattern twin --x-values 1000,10000";
  const RunResult direct = run_cli(args);
  const RunResult redirected = run_cli(args + " --out " + path.string());
  CHECK(redirected.exit_code == 0);
  CHECK(redirected.out.empty());
  CHECK(slurp(path) == direct.out);
  std::filesystem::remove(path);
}

TEST_CASE("constants table") {
  const RunResult result = run_cli("constants --cutoff 200000");
  REQUIRE(result.exit_code == 0);
  std::istringstream lines(result.out);
  std::string line;
  double twin_product = 0.0;
  while (std::getline(lines, line)) {
    if (line.rfind("twin_product,", 0) == 0) {
      twin_product = std::stod(line.substr(line.find(',') + 1));
    }
  }
  CHECK(twin_product == doctest::Approx(1.320324133643).epsilon(1e-7));
}

TEST_CASE("scalar prediction outputs") {
  CHECK(run_cli("predict --pattern twin --x 10000000").out == "57128.36055\n");
  CHECK(run_cli("brun --x 10000").out == "1.616893557\n");
}

TEST_CASE("exit code contract") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("--version").out == "1.0.0\n");
  CHECK(run_cli("").exit_code == 1);              // missing subcommand
  CHECK(run_cli("--bogus").exit_code == 1);       // unknown flag
  CHECK(run_cli("predict --pattern general:3:2 --x 1000").exit_code == 1);  // unsupported
  CHECK(run_cli("predict --pattern twin --x 2").exit_code == 2);            // out of range
}
