#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "codegraph/cli.hpp"

namespace codegraph::cli {
namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(const RunConfig& cfg) {
  std::ostringstream out, err;
  const int code = run(cfg, out, err);
  return {code, out.str(), err.str()};
}

RunConfig config(Command c, int n = 4, int k = 2, int q = 2) {
  RunConfig cfg;
  cfg.command = c;
  cfg.n = n;
  cfg.k = k;
  cfg.q = q;
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("codegraph_cli_" + name)).string();
}

TEST(Cli, EnumPrintsThirtyFiveBlocks) {
  const auto r = invoke(config(Command::Enum));
  ASSERT_EQ(r.code, kOk);
  EXPECT_EQ(parse_blocks(r.out).size(), 35u);
  auto cfg = config(Command::Enum);
  cfg.format = Format::Json;
  const auto j = nlohmann::json::parse(invoke(cfg).out);
  EXPECT_EQ(j["count"], 35);
  EXPECT_EQ(j["subspaces"].size(), 35u);
}

TEST(Cli, GraphReportsThirteenVertices) {
  auto cfg = config(Command::Graph);
  cfg.nondegenerate = true;
  const auto r = invoke(cfg);
  ASSERT_EQ(r.code, kOk);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "4 2 2 nondegenerate 13 51");
  cfg.format = Format::Json;
  const auto j = nlohmann::json::parse(invoke(cfg).out);
  EXPECT_EQ(j["vertices"], 13);
  EXPECT_EQ(j["invariants_hold"], true);
}

TEST(Cli, GraphWritesFileAndSidecar) {
  auto cfg = config(Command::Graph);
  cfg.nondegenerate = true;
  cfg.out = temp_path("graph.txt");
  const auto r = invoke(cfg);
  ASSERT_EQ(r.code, kOk);
  EXPECT_TRUE(r.out.empty());
  const auto graph = read_file(*cfg.out);
  EXPECT_EQ(graph.substr(0, graph.find('\n')), "4 2 2 nondegenerate 13 51");
  const auto sidecar = read_file(*cfg.out + ".vertices");
  EXPECT_NE(sidecar.find("v 12\n"), std::string::npos);
  std::filesystem::remove(*cfg.out);
  std::filesystem::remove(*cfg.out + ".vertices");
}

TEST(Cli, CliquesAtFourTwoTwo) {
  auto cfg = config(Command::Cliques);
  cfg.format = Format::Json;
  const auto r = invoke(cfg);
  ASSERT_EQ(r.code, kOk);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["stars"], 15);
  EXPECT_EQ(j["tops"], 15);
  EXPECT_EQ(j["neither"], 0);
  EXPECT_EQ(j["maximal_stars"], 1);
  EXPECT_EQ(j["criterion_checked"], 15);
}

TEST(Cli, HmapVerifyPasses) {
  for (int n = 4; n <= 6; ++n) {
    auto cfg = config(Command::HmapVerify, n);
    cfg.format = Format::Json;
    const auto r = invoke(cfg);
    ASSERT_EQ(r.code, kOk) << n;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["checks"].size(), 5u);
    EXPECT_EQ(j["all_passed"], true);
  }
  const auto text = invoke(config(Command::HmapVerify)).out;
  EXPECT_EQ(text.substr(0, text.find('\n')), "n 4 codes 13 A 7 B 3 C 3");
}

TEST(Cli, AutOrdersAgree) {
  auto cfg = config(Command::Aut);
  cfg.format = Format::Json;
  const auto j = nlohmann::json::parse(invoke(cfg).out);
  EXPECT_EQ(j["grassmann_group_order"], 40320);
  EXPECT_EQ(j["grassmann_direct_search"], 40320);
  EXPECT_EQ(j["code_graph_group_order"], 24);
  EXPECT_EQ(j["code_graph_direct_search"], 24);
}

// Exit 1 is reached only through a corrupted graph.
TEST(Cli, InjectedFaultGivesExitOne) {
  for (auto c : {Command::Graph, Command::Cliques, Command::HmapVerify}) {
    auto cfg = config(c);
    cfg.nondegenerate = true;
    EXPECT_EQ(invoke(cfg).code, kOk) << to_string(c);
    cfg.inject_fault = true;
    const auto r = invoke(cfg);
    EXPECT_EQ(r.code, kFalsified) << to_string(c);
    EXPECT_NE(r.err.find("assertion failed"), std::string::npos);
  }
  auto full = config(Command::Cliques);
  full.inject_fault = true;
  EXPECT_EQ(invoke(full).code, kFalsified);
}

TEST(Cli, InvalidConfigsGiveExitTwo) {
  EXPECT_EQ(invoke(config(Command::Enum, 4, 2, 4)).code, kInvalidConfig);
  EXPECT_EQ(invoke(config(Command::Enum, 4, 5, 2)).code, kInvalidConfig);
  EXPECT_EQ(invoke(config(Command::Graph, 4, 0, 2)).code, kInvalidConfig);
  EXPECT_EQ(invoke(config(Command::Graph, 12, 6, 2)).code, kInvalidConfig);
  EXPECT_EQ(invoke(config(Command::HmapVerify, 3)).code, kInvalidConfig);
  EXPECT_EQ(invoke(config(Command::Theorem, 6)).code, kInvalidConfig);
  EXPECT_EQ(invoke(config(Command::Theorem, 4, 3)).code, kInvalidConfig);
  auto jobs = config(Command::Enum);
  jobs.jobs = 0;
  EXPECT_EQ(invoke(jobs).code, kInvalidConfig);
  auto budget = config(Command::Theorem);
  budget.budget_secs = -1;
  EXPECT_EQ(invoke(budget).code, kInvalidConfig);
  auto unreduced = config(Command::Theorem, 5);
  unreduced.symmetry_depth = 0;
  EXPECT_EQ(invoke(unreduced).code, kInvalidConfig);
}

TEST(Cli, BudgetExhaustionGivesExitThree) {
  auto cfg = config(Command::Theorem, 5);
  cfg.symmetry_depth = 0;
  cfg.budget_secs = 0.3;
  cfg.format = Format::Json;
  const auto r = invoke(cfg);
  EXPECT_EQ(r.code, kBudgetExhausted);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["complete"], false);
  EXPECT_EQ(j["unclassified"], 0);
}

TEST(Cli, TheoremCertificateAtFour) {
  auto cfg = config(Command::Theorem);
  cfg.format = Format::Json;
  cfg.no_timing = true;
  const auto r = invoke(cfg);
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = nlohmann::ordered_json::parse(r.out);
  std::vector<std::string> keys;
  for (const auto& [key, v] : j.items()) keys.push_back(key);
  const std::vector<std::string> head{"n", "k", "q", "embeddings_total", "extendable", "exceptional",
                                      "unclassified", "lemma_chain", "complete", "wall_ms"};
  ASSERT_GE(keys.size(), head.size());
  EXPECT_EQ(std::vector<std::string>(keys.begin(), keys.begin() + 10), head);
  EXPECT_EQ(j["embeddings_total"], 80640);
  EXPECT_EQ(j["unclassified"], 0);
  EXPECT_EQ(j["complete"], true);
  EXPECT_EQ(j["wall_ms"], 0);
  for (const auto& [name, t] : j["lemma_chain"].items()) {
    EXPECT_EQ(t["failed"], 0) << name;
    EXPECT_EQ(t["skipped"], 0) << name;
  }
  EXPECT_EQ(r.out.find('.'), std::string::npos) << "no floats in the certificate";

  // Byte-identical across repeated runs and across worker counts.
  EXPECT_EQ(invoke(cfg).out, r.out);
  cfg.jobs = 4;
  EXPECT_EQ(invoke(cfg).out, r.out);
}

TEST(Cli, WitnessFileIsSchedulingIndependent) {
  auto cfg = config(Command::Theorem);
  cfg.no_timing = true;
  cfg.witnesses = temp_path("w1.txt");
  ASSERT_EQ(invoke(cfg).code, kOk);
  cfg.jobs = 3;
  cfg.witnesses = temp_path("w3.txt");
  ASSERT_EQ(invoke(cfg).code, kOk);
  const auto a = read_file(temp_path("w1.txt")), b = read_file(temp_path("w3.txt"));
  EXPECT_EQ(a, b);
  std::size_t lines = 0, exceptional = 0;
  std::istringstream in(a);
  for (std::string line; std::getline(in, line); ++lines) {
    exceptional += line.rfind("exceptional ", 0) == 0;
    EXPECT_NE(line.find(" | "), std::string::npos);
  }
  EXPECT_EQ(lines, 80640u);
  EXPECT_EQ(exceptional, 40320u);
  std::filesystem::remove(temp_path("w1.txt"));
  std::filesystem::remove(temp_path("w3.txt"));
}

TEST(Cli, JsonOutputsAreDeterministic) {
  for (auto c : {Command::Enum, Command::Graph, Command::Cliques, Command::HmapVerify, Command::Aut}) {
    auto cfg = config(c, 5);
    cfg.format = Format::Json;
    const auto a = invoke(cfg), b = invoke(cfg);
    EXPECT_EQ(a.code, kOk) << to_string(c);
    EXPECT_EQ(a.out, b.out) << to_string(c);
    cfg.jobs = 4;
    EXPECT_EQ(invoke(cfg).out, a.out) << to_string(c);
  }
}

TEST(Cli, CommandNamesRoundTrip) {
  for (auto c : {Command::Enum, Command::Graph, Command::Cliques, Command::HmapVerify, Command::Aut, Command::Theorem})
    EXPECT_EQ(parse_command(to_string(c)), c);
  EXPECT_FALSE(parse_command("bogus"));
}

}  // namespace
}  // namespace codegraph::cli
