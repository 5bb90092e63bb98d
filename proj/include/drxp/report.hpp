#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "drxp/msmp.hpp"

namespace drxp {

struct ReportEntry {
  ExplanationKind kind = ExplanationKind::AXp;
  std::vector<FeatureId> features;
  std::optional<bool> verified;  // nullopt when verification was skipped
};

struct RunReport {
  // query echo
  double epsilon = 1.0;
  std::string norm = "l1";
  std::string kind = "axp";  // axp | cxp | both (enumeration)
  std::string algorithm = "swift";
  double delta = 0.75;
  bool fdEnabled = true;
  std::string fdActivation = "pool-fraction-within-batch";
  std::vector<FeatureId> ordering;
  std::uint64_t seed = 0;
  bool enumerate = false;

  std::string oracleName;
  bool oracleExact = true;
  bool oracleGeometricWitness = true;

  std::vector<ReportEntry> explanations;
  std::optional<bool> complete;  // enumeration only

  // execution section: varies with q and timing
  std::size_t processors = 1;
  RunStats stats;
};

/// `stable` omits the execution section, giving output that depends only on
/// the query, oracle and ordering.
nlohmann::json reportToJson(const RunReport& report, bool stable = false);
RunReport reportFromJson(const nlohmann::json& j);
std::string renderText(const RunReport& report, bool stable = false);

}  // namespace drxp
