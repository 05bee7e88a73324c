#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "codegraph/cli.hpp"

int main(int argc, char** argv) {
  using namespace codegraph::cli;
  CLI::App app{"Grassmann graphs, linear-code graphs and their embeddings over small prime fields"};
  app.option_defaults()->always_capture_default();

  RunConfig cfg;
  std::string command, format = "text";
  double budget = 0;
  std::size_t depth = 0;
  app.add_option("command", command, "enum | graph | cliques | hmap-verify | aut | theorem")
      ->required()
      ->check(CLI::IsMember({"enum", "graph", "cliques", "hmap-verify", "aut", "theorem"}));
  app.add_option("--n", cfg.n, "ambient dimension");
  app.add_option("--k", cfg.k, "subspace dimension");
  app.add_option("--q", cfg.q, "field size (prime)");
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--jobs", cfg.jobs, "worker threads for the theorem search");
  auto* budget_opt = app.add_option("--budget-secs", budget, "wall-clock budget for the theorem search");
  auto* out_opt = app.add_option("--out", "report path (graph: adjacency file, plus <path>.vertices)");
  app.add_flag("--nondegenerate", cfg.nondegenerate, "use the non-degenerate code graph");
  app.add_flag("--inject-fault", cfg.inject_fault, "add one false edge to exercise the failure path");
  app.add_flag("--no-timing", cfg.no_timing, "report wall_ms as 0 for byte-stable output");
  auto* depth_opt = app.add_option("--symmetry-depth", depth, "theorem: search levels reduced by the automorphism group");
  auto* wit_opt = app.add_option("--witnesses", "theorem: write per-embedding verdicts and witnesses here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalidConfig;
  }

  cfg.command = *parse_command(command);
  cfg.format = format == "json" ? Format::Json : Format::Text;
  if (*budget_opt) cfg.budget_secs = budget;
  if (*out_opt) cfg.out = out_opt->as<std::string>();
  if (*depth_opt) cfg.symmetry_depth = depth;
  if (*wit_opt) cfg.witnesses = wit_opt->as<std::string>();
  return run(cfg, std::cout, std::cerr);
}
