#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(MPCA_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buf[4096];
  while (std::size_t got = fread(buf, 1, sizeof(buf), pipe)) result.out.append(buf, got);
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

fs::path temp_file(const std::string& name, const std::string& content) {
  fs::path dir = fs::temp_directory_path() / "mpca_cli_test";
  fs::create_directories(dir);
  fs::path path = dir / name;
  std::ofstream(path, std::ios::binary) << content;
  return path;
}

}  // namespace

TEST_CASE("gen is deterministic and recognizable") {
  RunResult a = run_cli("gen --users 2 --channels 6 --k 3 --seed 11");
  RunResult b = run_cli("gen --users 2 --channels 6 --k 3 --seed 11");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  json doc = json::parse(a.out);
  CHECK(doc["num_channels"] == 6);
  CHECK(doc["channel_groups"].size() == 6);
  CHECK(doc["generator"]["rng"] == "mt19937_64");
  // even split of 6 channels into 3 groups
  std::vector<int> counts(3, 0);
  for (int id : doc["channel_groups"].get<std::vector<int>>()) ++counts[id];
  CHECK(counts == std::vector<int>{2, 2, 2});

  RunResult c = run_cli("gen --users 2 --channels 6 --k 3 --seed 12");
  CHECK(c.out != a.out);
}

TEST_CASE("solve auto tags 1mpca on a single-group instance") {
  RunResult gen = run_cli("gen --users 3 --channels 8 --k 1 --seed 5");
  fs::path inst = temp_file("k1.json", gen.out);
  RunResult solved = run_cli("solve --in " + inst.string() + " --algo auto");
  CHECK(solved.exit_code == 0);
  json rep = json::parse(solved.out);
  CHECK(rep["algorithm"] == "1mpca");
  CHECK(rep["objective"].is_number());
  CHECK(rep["instance_digest"].get<std::string>().size() == 64);
}

TEST_CASE("enum and subset-dp give equal objectives via the CLI") {
  RunResult gen = run_cli("gen --users 2 --channels 5 --k 5 --seed 9");
  fs::path inst = temp_file("gen5.json", gen.out);
  json a = json::parse(run_cli("solve --in " + inst.string() + " --algo subset-dp").out);
  json b = json::parse(run_cli("solve --in " + inst.string() + " --algo enum").out);
  CHECK(a["objective"].get<double>() ==
        doctest::Approx(b["objective"].get<double>()).epsilon(1e-12));
}

TEST_CASE("block-match on indivisible N exits 2") {
  RunResult gen = run_cli("gen --users 2 --channels 5 --k 5 --seed 13");
  fs::path inst = temp_file("n5.json", gen.out);
  RunResult solved = run_cli("solve --in " + inst.string() + " --algo block-match");
  CHECK(solved.exit_code == 2);
  CHECK(solved.out.empty());
}

TEST_CASE("consecutive requires --blocks") {
  RunResult gen = run_cli("gen --users 2 --channels 4 --k 4 --seed 17");
  fs::path inst = temp_file("n4.json", gen.out);
  RunResult no_blocks = run_cli("solve --in " + inst.string() + " --algo consecutive");
  CHECK(no_blocks.exit_code == 1);
  RunResult ok = run_cli("solve --in " + inst.string() + " --algo consecutive --blocks 2,2");
  CHECK(ok.exit_code == 0);
  CHECK(json::parse(ok.out)["algorithm"] == "consecutive");
}

TEST_CASE("missing and malformed input files exit 1") {
  CHECK(run_cli("solve --in /nonexistent.json --algo auto").exit_code == 1);
  fs::path bad = temp_file("bad.json", "{not json");
  CHECK(run_cli("solve --in " + bad.string() + " --algo auto").exit_code == 1);
}

TEST_CASE("recognize prints the structure and honors --reference") {
  RunResult gen = run_cli("gen --users 2 --channels 6 --k 2 --seed 21");
  fs::path inst = temp_file("k2.json", gen.out);
  json fast = json::parse(run_cli("recognize --in " + inst.string()).out);
  json ref = json::parse(run_cli("recognize --in " + inst.string() + " --reference").out);
  CHECK(fast["k"] == 2);
  CHECK(fast == ref);
}

TEST_CASE("reduce emits the instance and decides satisfiability") {
  fs::path cnf = temp_file("f.cnf", "p cnf 1 1\n1 1 -1 0\n");
  fs::path out = fs::temp_directory_path() / "mpca_cli_test" / "reduced.json";
  RunResult r =
      run_cli("reduce --mode a --cnf " + cnf.string() + " --out " + out.string() + " --decide");
  CHECK(r.exit_code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["num_users"] == 3);
  CHECK(doc["num_channels"] == 8);
  CHECK(doc["sat"] == true);
  CHECK(fs::exists(out));

  RunResult b = run_cli("reduce --mode b --cnf " + cnf.string() + " --decide");
  json bdoc = json::parse(b.out);
  CHECK(bdoc["num_channels"] == 10);
  CHECK(bdoc["block_sizes"] == json::array({3, 3, 1}));
  CHECK(bdoc["sat"] == true);

  fs::path unsat = temp_file("u.cnf", "p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n");
  json udoc = json::parse(run_cli("reduce --mode a --cnf " + unsat.string() + " --decide").out);
  CHECK(udoc["sat"] == false);

  fs::path two_lit = temp_file("two.cnf", "p cnf 1 1\n1 -1 0\n");
  CHECK(run_cli("reduce --mode a --cnf " + two_lit.string()).exit_code == 1);
}

TEST_CASE("verify suites succeed end to end") {
  RunResult r = run_cli("verify --suite matching --seeds 8");
  CHECK(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string line, last;
  int count = 0;
  while (std::getline(lines, line)) {
    CHECK_NOTHROW(json::parse(line));  // JSON-lines output
    last = line;
    ++count;
  }
  CHECK(count == 8 * 3 + 1);
  CHECK(json::parse(last)["failures"] == 0);
}

TEST_CASE("bench emits one CSV row per sweep cell") {
  RunResult r = run_cli("bench --algo 1mpca --sweep N=16..64 --users 4 --seed 3");
  CHECK(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "algo,M,N,K,seed,objective,wall_time_s");
  int rows = 0;
  std::string line;
  while (std::getline(lines, line)) {
    CHECK(line.find("nan") == std::string::npos);
    CHECK(line.rfind("1mpca,4,", 0) == 0);
    ++rows;
  }
  CHECK(rows == 3);  // 16, 32, 64

  RunResult badflags = run_cli("bench --algo 1mpca --sweep Q=1..2");
  CHECK(badflags.exit_code == 1);
}
