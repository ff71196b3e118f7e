#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "pplab/census.hpp"
#include "pplab/cli.hpp"

using namespace pplab;

namespace {

struct Run {
  int code;
  std::string out, err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "pplab");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string digits(const FFElement& e) {
  std::string s;
  for (auto d : e.digits()) s += (s.empty() ? "" : ":") + std::to_string(d);
  return s;
}

}  // namespace

TEST_CASE("digit parsing") {
  CHECK(parse_digits("3", 7, 1) == std::vector<std::uint32_t>{3});
  CHECK(parse_digits("3:1", 5, 2) == std::vector<std::uint32_t>{3, 1});
  CHECK(parse_digits("3", 5, 2) == std::vector<std::uint32_t>{3, 0});
  CHECK(parse_digits("1,2", 5, 2) == std::vector<std::uint32_t>{1, 2});
  CHECK_THROWS_AS(parse_digits("7", 7, 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_digits("1:2", 7, 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_digits("x", 7, 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_digits("1::2", 7, 3), std::invalid_argument);
  CHECK_THROWS_AS(parse_digits("", 7, 1), std::invalid_argument);
}

TEST_CASE("verify") {
  auto r = run({"verify", "--p", "7", "--h", "1", "--family", "f1", "--A", "0", "--B", "0"});
  CHECK(r.code == kExitOk);
  auto j = r.json();
  CHECK(j["conditions"]["pass"] == false);
  const auto reasons = j["conditions"]["reasons"].get<std::vector<std::string>>();
  CHECK(std::find(reasons.begin(), reasons.end(), "B ∈ {0,1}") != reasons.end());
  CHECK(j["bruteforce"] == "skipped");
  CHECK(j["meta"]["version"].is_string());

  // congruence mismatch
  r = run({"verify", "--p", "5", "--h", "1", "--family", "f3", "--A", "1", "--B", "1"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("q = 1 mod 3") != std::string::npos);
  CHECK(run({"verify", "--p", "7", "--A", "9"}).code == kExitUsage);
  CHECK(run({"verify", "--p", "8"}).code == kExitUsage);
  CHECK(run({"verify", "--p", "7", "--family", "f5"}).code == kExitUsage);
  CHECK(run({"verify", "--p", "7", "--workers", "0"}).code == kExitUsage);
  CHECK(run({"verify", "--p", "7", "--bruteforce", "--budget", "10"}).code == kExitFinding);

  // a passing q = 13 pair is a permutation
  const auto census = run_census(Family::f2, 13, 1);
  int checked = 0;
  for (const auto& row : census.rows) {
    if (!row.passes) continue;
    r = run({"verify", "--p", "13", "--family", "f2", "--A", digits(row.A), "--B", digits(row.B), "--bruteforce"});
    CHECK(r.code == kExitOk);
    j = r.json();
    CHECK(j["conditions"]["pass"] == true);
    CHECK(j["bruteforce"] == "PP");
    CHECK(j["anomaly"] == false);
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("verify reports an f3 counterexample as an anomaly") {
  const auto census = run_census(Family::f3, 7, 1);
  for (const auto& row : census.rows) {
    if (!row.passes) continue;
    auto r = run({"verify", "--p", "7", "--family", "f3", "--A", digits(row.A), "--B", digits(row.B), "--bruteforce"});
    CHECK(r.code == kExitFinding);
    CHECK(r.json()["anomaly"] == true);
  }
}

TEST_CASE("census artifacts") {
  auto r = run({"census", "--family", "f1", "--p", "29", "--h", "2"});
  CHECK(r.code == kExitOk);
  auto j = r.json();
  CHECK(j["bound_satisfied"] == true);
  CHECK(j["pairs_passing"].get<int>() >= 21);
  CHECK(j["q"] == 841);

  r = run({"census", "--family", "f4", "--p", "13", "--h", "2"});
  j = r.json();
  CHECK(j["bound_satisfied"] == true);
  CHECK(j["bound_count"].get<int>() >= 5);
  CHECK(j["per_B"].size() == 2);

  // CSV schema and determinism
  const std::vector<std::string> args{"census", "--family", "f2", "--p", "13", "--bruteforce", "--format", "csv"};
  const auto a = run(args);
  CHECK(a.code == kExitOk);
  std::istringstream lines(a.out);
  std::string first, header, row;
  std::getline(lines, first);
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(first.rfind("# seed=", 0) == 0);
  CHECK(first.find("config_hash=") != std::string::npos);
  CHECK(first.find("version=") != std::string::npos);
  CHECK(header == "family,p,h,q,A,B,passes,bruteforce_pp");
  CHECK(row.rfind("f2,13,1,13,", 0) == 0);
  CHECK(run(args).out == a.out);
  auto more = args;
  more.insert(more.end(), {"--workers", "3"});
  CHECK(run(more).out == a.out);
  setenv("PPLAB_WORKERS", "2", 1);
  CHECK(run(args).out == a.out);
  unsetenv("PPLAB_WORKERS");

  // anomalies give a nonzero exit
  r = run({"census", "--family", "f3", "--p", "7", "--bruteforce"});
  CHECK(r.code == kExitFinding);
  CHECK(r.json()["anomalies"].size() == 4);
  CHECK(r.json()["bound_value"] == "none");
  CHECK(run({"census", "--family", "f4", "--p", "5"}).code == kExitUsage);
}

TEST_CASE("config hash tracks the configuration") {
  const auto a = run({"field-info", "--p", "7"}).json();
  const auto b = run({"field-info", "--p", "7", "--seed", "3"}).json();
  const auto c = run({"field-info", "--p", "7", "--workers", "4"}).json();
  CHECK(a["meta"]["config_hash"] != b["meta"]["config_hash"]);
  CHECK(a["meta"]["config_hash"] == c["meta"]["config_hash"]);
  CHECK(b["meta"]["seed"] == 3);
  CHECK(a["field"] == "p=7 h=1 base_modulus=0,1 cubic_modulus=1,0,1,1");
  CHECK(a["mu_intersect_base"].size() == 3);
}

TEST_CASE("identities") {
  auto r = run({"identities", "--all"});
  CHECK(r.code == kExitOk);
  CHECK(r.json()["all_hold"] == true);
  CHECK(r.json()["reciprocal"]["holds"] == true);
  r = run({"identities", "--family", "f2", "--probabilistic"});
  CHECK(r.code == kExitOk);
  CHECK(r.json()["identities"][0]["points"] == 40);
  CHECK(run({"identities", "--family", "f3"}).code == kExitUsage);
}

TEST_CASE("pipeline") {
  const auto dir = std::filesystem::temp_directory_path() / "pplab_cli_pipeline";
  std::filesystem::remove_all(dir);
  auto r = run({"pipeline", "--family", "f3", "--branch", "a_zero", "--out", dir.string()});
  CHECK(r.code == kExitOk);
  auto j = r.json();
  CHECK(j["structure_ok"] == true);
  REQUIRE(j["certified_factors"].size() == 3);
  for (const auto& f : j["certified_factors"]) CHECK(f["divides"] == true);
  CHECK(slurp(dir / "f3_a_zero.zpoly") == slurp(std::filesystem::path(PPLAB_GOLDEN_DIR) / "f3_a_zero.zpoly"));
  CHECK(std::filesystem::exists(dir / "f3_a_zero.json"));
  r = run({"pipeline", "--family", "f1", "--probabilistic"});
  CHECK(r.code == kExitOk);
  CHECK(r.json()["points"] == 40);
  CHECK(run({"pipeline", "--family", "f1", "--branch", "a_zero"}).code == kExitUsage);
  std::filesystem::remove_all(dir);
}

TEST_CASE("curves") {
  auto r = run({"curves", "--p", "61"});
  CHECK(r.code == kExitOk);
  CHECK(r.json()["curves"].size() == 3);
  r = run({"curves", "--p", "5", "--curve", "P1", "--format", "csv"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("curve,p,h,q,solution_count") != std::string::npos);
  CHECK(run({"curves", "--p", "5", "--curve", "P2"}).code == kExitUsage);
  CHECK(run({"curves", "--p", "5", "--curve", "P9"}).code == kExitUsage);
}

TEST_CASE("usage") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({"frobnicate"}).code == kExitUsage);
}
