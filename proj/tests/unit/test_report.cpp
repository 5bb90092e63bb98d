#include "doctest.h"

#include "drxp/errors.hpp"
#include "drxp/report.hpp"

using namespace drxp;

namespace {

RunReport sample() {
  RunReport r;
  r.epsilon = 1.5;
  r.norm = "l1";
  r.kind = "both";
  r.algorithm = "dichotomic";
  r.fdEnabled = false;
  r.ordering = {3, 1, 2};
  r.seed = 42;
  r.enumerate = true;
  r.oracleName = "grid";
  r.explanations = {{ExplanationKind::AXp, {1, 3}, true},
                    {ExplanationKind::CXp, {1}, std::nullopt},
                    {ExplanationKind::CXp, {3}, false}};
  r.complete = true;
  r.processors = 4;
  r.stats.oracleCalls = 17;
  r.stats.parallelRounds = 9;
  r.stats.cancelledCalls = 2;
  r.stats.fdInvocations = 1;
  r.stats.fdFreed = 1;
  r.stats.wallTime = std::chrono::milliseconds(12);
  return r;
}

}  // namespace

TEST_CASE("reports round-trip through their JSON form") {
  const auto r = sample();
  const auto j = reportToJson(r);
  const auto back = reportFromJson(j);
  CHECK(reportToJson(back) == j);
  CHECK(back.explanations.size() == 3);
  CHECK(back.explanations[1].verified == std::nullopt);
  CHECK(back.stats.oracleCalls == 17);
  CHECK(back.processors == 4);

  const auto parsed = reportFromJson(nlohmann::json::parse(j.dump()));
  CHECK(reportToJson(parsed) == j);
}

TEST_CASE("the stable rendering drops run-dependent statistics") {
  auto a = sample();
  auto b = sample();
  b.processors = 1;
  b.stats.oracleCalls = 3;
  b.stats.wallTime = std::chrono::seconds(2);
  CHECK(reportToJson(a, true).dump() == reportToJson(b, true).dump());
  CHECK(reportToJson(a).dump() != reportToJson(b).dump());
  CHECK_FALSE(reportToJson(a, true).contains("execution"));
  CHECK(renderText(a, true) == renderText(b, true));
  CHECK(renderText(a).find("calls=17") != std::string::npos);
  CHECK(renderText(a, true).find("calls=") == std::string::npos);

  const auto stable = reportFromJson(reportToJson(a, true));
  CHECK(reportToJson(stable, true) == reportToJson(a, true));
}

TEST_CASE("text rendering lists explanations and verification") {
  const auto text = renderText(sample());
  CHECK(text.find("axp {1,3}  verified") != std::string::npos);
  CHECK(text.find("cxp {3}  NOT MINIMAL") != std::string::npos);
  CHECK(text.find("ordering: {3,1,2}") != std::string::npos);
  CHECK(text.find("fd=off") != std::string::npos);
}

TEST_CASE("malformed reports are rejected") {
  CHECK_THROWS_AS(reportFromJson(nlohmann::json::object()), SchemaError);
  auto j = reportToJson(sample());
  j["explanations"][0]["kind"] = "bxp";
  CHECK_THROWS_AS(reportFromJson(j), SchemaError);
}
