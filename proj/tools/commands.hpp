#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace drxp::cli {

enum ExitCode : int {
  kOk = 0,
  kNoExplanation = 1,
  kUsage = 2,
  kOracleFailure = 3,
};

struct ExplainArgs {
  std::string model;
  std::string instance;
  std::optional<double> epsilon;
  std::string norm = "l1";
  std::string kind = "axp";
  std::string algorithm = "swift";
  std::size_t processors = 0;  // 0 = hardware concurrency
  double delta = 0.75;
  bool noFd = false;
  std::string fdActivation = "pool-fraction-within-batch";
  std::vector<std::size_t> order;
  bool randomOrder = false;
  std::uint64_t seed = 0;
  bool enumerate = false;
  std::size_t limit = 0;
  std::string seedPreference = "maximal";
  std::string oracle;  // grid | external; empty = external iff DRXP_ORACLE_CMD is set
  std::string out;
  std::string format = "text";
  bool noVerify = false;
  bool stable = false;
};

struct BenchArgs {
  bool synthetic = false;
  std::size_t features = 100;
  std::size_t breakers = 10;
  std::size_t breakerSize = 1;
  double latencyMs = 50;
  std::size_t trials = 1;
  std::string fixtures;
  double epsilon = 1.0;
  std::string norm = "l1";
  std::string kind = "axp";
  std::vector<std::string> algorithms{"deletion", "swift"};
  std::vector<std::size_t> processors{8};
  double delta = 0.75;
  bool noFd = false;
  std::string fdActivation = "pool-fraction-within-batch";
  std::uint64_t seed = 0;
  std::string json;
  std::string format = "text";
};

void addExplainOptions(CLI::App& cmd, ExplainArgs& args);
void addBenchOptions(CLI::App& cmd, BenchArgs& args);

int runExplain(const ExplainArgs& args);
int runBench(const BenchArgs& args);

}  // namespace drxp::cli
