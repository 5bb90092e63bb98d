#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Distance-restricted abductive and contrastive explanations"};
  app.require_subcommand(1);

  drxp::cli::ExplainArgs explain;
  auto* explainCmd = app.add_subcommand("explain", "Compute or enumerate explanations for one instance");
  drxp::cli::addExplainOptions(*explainCmd, explain);

  drxp::cli::BenchArgs bench;
  auto* benchCmd = app.add_subcommand("bench", "Compare extraction algorithms on a suite");
  drxp::cli::addBenchOptions(*benchCmd, bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const auto active = app.get_subcommands();
    std::cerr << (active.empty() ? app.help() : active.front()->help());
    return drxp::cli::kUsage;
  }

  if (*explainCmd) return drxp::cli::runExplain(explain);
  return drxp::cli::runBench(bench);
}
