#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <sstream>

#include "asepx/cli.hpp"

using namespace asepx;

namespace {

struct Outcome {
  int code = 0;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Runs the built binary; returns exit status and stdout.
std::pair<int, std::string> run_binary(const std::string& args) {
  const std::string cmd = std::string(ASEPX_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t k = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), k);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST(Cli, StationaryMatrixProductExample) {
  const auto r = run_cli({"stationary", "--n", "2", "--L", "4", "--mult", "2,1,1", "--method", "mp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["schema"], "asepx/1");
  EXPECT_EQ(j["state"]["0012"], Json::array({"3", "1"}));
  EXPECT_EQ(j["state"]["0102"], Json::array({"2", "2"}));
  EXPECT_EQ(j["state"]["1002"], Json::array({"1", "3"}));
  EXPECT_EQ(j["state"].size(), 12u);
}

TEST(Cli, OneSpeciesKernelIsUniform) {
  const auto r = run_cli({"stationary", "--n", "1", "--L", "3", "--mult", "2,1", "--method", "kernel"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& [k, v] : r.json()["state"].items()) EXPECT_EQ(v, Json::array({"1"})) << k;
}

TEST(Cli, AllMethodsAgree) {
  for (const std::string m : {"1,1,1", "2,1,1", "1,1,2", "1,1,1,1"}) {
    const auto r = run_cli({"stationary", "--mult", m, "--all-methods"});
    ASSERT_EQ(r.code, 0) << m << r.err;
    EXPECT_EQ(r.json()["status"], "EQUAL") << m;
  }
}

TEST(Cli, TextFormat) {
  const auto r = run_cli({"stationary", "--mult", "1,1,1", "--format", "text"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("012 2 + t\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("021 1 + 2*t\n"), std::string::npos) << r.out;
}

TEST(Cli, DumpMlqListsEveryQueue) {
  const auto r = run_cli({"stationary", "--mult", "1,1,1", "--method", "mlq", "--dump-mlq"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  ASSERT_TRUE(j.contains("mlqs"));
  // 3 placements of the upper row; below it the ball is forced when it sits
  // under an upper ball (2 columns) and has two targets otherwise: 3 * (1 + 1 + 2)
  const auto d = run_cli({"dump-mlq", "--mult", "1,1,1"}).json();
  EXPECT_EQ(d["count"], 12);
  EXPECT_EQ(j["mlqs"], d["mlqs"]);
  for (const auto& q : d["mlqs"]) {
    EXPECT_EQ(q["rows"].size(), 2u);
    for (const auto& a : q["arrows"]) EXPECT_EQ(a.size(), 3u);
  }
}

TEST(Cli, MlqAtGeneralQ) {
  const auto r = run_cli({"stationary", "--mult", "1,1,1", "--method", "mlq", "--q", "1/2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["q"], "1/2");
  EXPECT_EQ(run_cli({"stationary", "--mult", "1,1,1", "--method", "mp", "--q", "1/2"}).code, 2);
  EXPECT_EQ(run_cli({"stationary", "--mult", "1,1,1", "--method", "mlq", "--q", "abc"}).code, 2);
}

TEST(Cli, Sector) {
  const auto r = run_cli({"sector", "--n", "2", "--L", "4", "--mult", "2,1,1"});
  ASSERT_EQ(r.code, 0);
  const Json j = r.json();
  EXPECT_EQ(j["basis"].size(), 12u);
  EXPECT_EQ(j["markov"]["dim"], 12);
  EXPECT_TRUE(j["basic"].get<bool>());
}

TEST(Cli, DumpX) {
  const auto j = run_cli({"dump-x", "--n", "3", "--alpha", "1"}).json();
  ASSERT_EQ(j["operators"].size(), 1u);
  const auto& terms = j["operators"][0]["terms"];
  ASSERT_EQ(terms.size(), 2u);
  EXPECT_EQ(terms[0]["zdeg"], 1);
  EXPECT_EQ(terms[0]["word"], "k|k|");
  EXPECT_EQ(terms[1]["word"], "k|k|+");
  EXPECT_EQ(run_cli({"dump-x", "--n", "3"}).json()["operators"].size(), 4u);
  EXPECT_EQ(run_cli({"dump-x", "--n", "2", "--alpha", "5"}).code, 2);
}

TEST(Cli, VerifyChecks) {
  for (const std::string c : {"ybe", "qp", "lt-link", "zf", "hat", "rtt", "rll", "ms-theorem", "stationary"}) {
    const auto r = run_cli({"verify", c, "--n", "2", "--trials", "2", "--fock-dim", "8", "--seed", "7"});
    EXPECT_EQ(r.code, 0) << c << ": " << r.out << r.err;
    EXPECT_TRUE(r.json()["passed"].get<bool>()) << c;
  }
  EXPECT_EQ(run_cli({"verify", "nonsense"}).code, 2);
  EXPECT_EQ(run_cli({"verify", "stationary", "--mult", "2,1,2"}).json()["details"]["sector"], "2,1,2");
}

TEST(Cli, Simulate) {
  const auto r = run_cli({"simulate", "--mult", "1,1,1", "--horizon", "200", "--seed", "3", "--compare"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_GT(j["events"].get<long>(), 0);
  double total = 0;
  for (const auto& [k, v] : j["distribution"].items()) {
    total += v["fraction"].get<double>();
    EXPECT_TRUE(v.contains("exact"));
  }
  EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"stationary", "--mult", "2,1,1", "--L", "5"}).code, 2);
  EXPECT_EQ(run_cli({"stationary", "--mult", "2,1,1", "--n", "3"}).code, 2);
  EXPECT_EQ(run_cli({"stationary", "--mult", "2,1,1", "--method", "guess"}).code, 2);
  EXPECT_EQ(run_cli({"stationary", "--mult", "2,1,1", "--format", "xml"}).code, 2);
  EXPECT_EQ(run_cli({"stationary"}).code, 2);
  EXPECT_EQ(run_cli({"stationary", "--mult", "x,y"}).code, 2);
}

TEST(Cli, ComputationErrorsExitOne) {
  const auto r = run_cli({"stationary", "--mult", "2,0,1", "--method", "mp"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("basic"), std::string::npos);
}

TEST(Cli, BinaryExitCodesAndDeterminism) {
  const auto a = run_binary("verify zf --n 2 --trials 5 --seed 7 --fock-dim 10");
  EXPECT_EQ(a.first, 0);
  const auto b = run_binary("verify zf --n 2 --trials 5 --seed 7 --fock-dim 10");
  EXPECT_EQ(a.second, b.second);
  const auto s1 = run_binary("simulate --mult 2,1,1 --horizon 50 --seed 11");
  const auto s2 = run_binary("simulate --mult 2,1,1 --horizon 50 --seed 11");
  EXPECT_EQ(s1.first, 0);
  EXPECT_EQ(s1.second, s2.second);
  EXPECT_EQ(run_binary("stationary --mult 2,1,1 --L 9").first, 2);
  EXPECT_EQ(run_binary("stationary --mult 2,0,1 --method mp").first, 1);
  EXPECT_EQ(run_binary("--help").first, 0);
}
