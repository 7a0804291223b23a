#include <gtest/gtest.h>

#include <sstream>

#include "curvid/cli.hpp"

using namespace curvid;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  std::vector<const char*> argv{"curvid"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, ExpandPfaffian) {
  const auto r = run_cli({"expand", "--pfaffian", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "2 R[a,b,b,a]\n");
  EXPECT_EQ(run_cli({"expand", "--t2", "2"}).code, 0);
  EXPECT_EQ(run_cli({"expand", "--pfaffian", "3"}).code, 2);
  EXPECT_EQ(run_cli({"expand", "--pfaffian", "2", "--t2", "2"}).code, 2);
  EXPECT_EQ(run_cli({"expand"}).code, 2);
}

TEST(Cli, VerifyLemmas) {
  auto r = run_cli({"verify", "--lemma", "1.2.2", "--trials", "100"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "kernel vector (1, -4, 1) confirmed in dim 3\n");
  r = run_cli({"verify", "--lemma", "1.2.2", "--dim", "4"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("not confirmed in dim 4"), std::string::npos);
  r = run_cli({"verify", "--lemma", "1.4.1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "kernel vector (1, -2) confirmed in dim 2\n");
  r = run_cli({"verify", "--lemma", "1.2.1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "identity 1.2.1 holds in dim 1 (60 samples)\n");
  EXPECT_EQ(run_cli({"verify", "--lemma", "1.4.2", "--dim", "5", "--trials", "20"}).code, 1);
  EXPECT_EQ(run_cli({"verify", "--lemma", "7.7"}).code, 2);
  EXPECT_EQ(run_cli({"verify"}).code, 2);
}

TEST(Cli, InconclusiveIsExitOne) {
  const auto r = run_cli({"verify", "--lemma", "1.2.2", "--trials", "5", "--json"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("\"inconclusive\""), std::string::npos);
}

TEST(Cli, KernelAndSpanningSet) {
  auto r = run_cli({"kernel", "--weight", "2", "--valence", "sym2", "--dim", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("kernel dimension 1 in dim 2"), std::string::npos);
  r = run_cli({"kernel", "--weight", "4", "--dim", "4"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("kernel dimension 0 in dim 4"), std::string::npos);
  r = run_cli({"spanning-set", "--weight", "2", "--valence", "sym2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 10), "2 elements");
  EXPECT_EQ(run_cli({"spanning-set", "--weight", "3"}).code, 2);
  EXPECT_EQ(run_cli({"kernel", "--weight", "2", "--valence", "vector", "--dim", "2"}).code, 2);
}

TEST(Cli, GaussBonnet) {
  const auto r = run_cli({"gauss-bonnet"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("c_m = 1/8 pi^-1"), std::string::npos);
  EXPECT_NE(r.out.find("c_m = 1/128 pi^-2"), std::string::npos);
  EXPECT_EQ(run_cli({"gauss-bonnet", "--dim", "3"}).code, 2);
  EXPECT_EQ(run_cli({"gauss-bonnet", "--dim", "8"}).code, 2);
}

TEST(Cli, Variation) {
  auto r = run_cli({"variation", "--dim", "3", "--weight", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("d "), std::string::npos);
  EXPECT_EQ(run_cli({"variation", "--dim", "7", "--weight", "2"}).code, 2);
  EXPECT_EQ(run_cli({"variation", "--dim", "3", "--weight", "2", "--epsilon", "-1"}).code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  const auto r = run_cli({"expand", "--pfaffian", "2", "--bogus"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("hint"), std::string::npos);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Cli, JsonIsDeterministic) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"expand", "--t2", "4", "--json"},
           {"verify", "--lemma", "1.2.2", "--json", "--seed", "9"},
           {"gauss-bonnet", "--json"},
           {"kernel", "--weight", "2", "--valence", "sym2", "--dim", "3", "--json"}}) {
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    const auto j = Json::parse(a.out);
    EXPECT_EQ(j.at("schema"), kReportSchema);
    EXPECT_EQ(j.at("status"), "ok");
  }
}

TEST(Cli, ParseArgs) {
  const auto p = cli::parse_args(std::vector<std::string>{"kernel", "--weight", "4", "--dim", "5", "--seed", "3"});
  ASSERT_TRUE(p.config);
  EXPECT_EQ(p.config->command, "kernel");
  EXPECT_EQ(*p.config->weight, 4);
  EXPECT_EQ(*p.config->dim, 5);
  EXPECT_EQ(p.config->seed, 3u);
  EXPECT_FALSE(p.config->json);
  EXPECT_EQ(p.config->valence, Valence::scalar);
}
