#include "drxp/report.hpp"

#include <sstream>

#include "drxp/errors.hpp"

namespace drxp {

using nlohmann::json;

namespace {

ExplanationKind kindFromString(const std::string& s) {
  if (s == "axp") return ExplanationKind::AXp;
  if (s == "cxp") return ExplanationKind::CXp;
  throw SchemaError("$.explanations[].kind: expected axp or cxp, got '" + s + "'");
}

std::string lower(ExplanationKind k) { return k == ExplanationKind::AXp ? "axp" : "cxp"; }

std::string listStr(const std::vector<FeatureId>& ids) {
  std::string s = "{";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(ids[i]);
  }
  return s + "}";
}

}  // namespace

json reportToJson(const RunReport& r, bool stable) {
  json j;
  j["query"] = {
      {"epsilon", r.epsilon},   {"norm", r.norm},
      {"kind", r.kind},         {"algorithm", r.algorithm},
      {"delta", r.delta},       {"fd", r.fdEnabled},
      {"fd_activation", r.fdActivation},
      {"ordering", r.ordering}, {"seed", r.seed},
      {"enumerate", r.enumerate},
  };
  j["oracle"] = {{"name", r.oracleName},
                 {"exact", r.oracleExact},
                 {"geometric_witness", r.oracleGeometricWitness}};
  json list = json::array();
  for (const auto& e : r.explanations) {
    json item = {{"kind", lower(e.kind)}, {"features", e.features}};
    item["verified"] = e.verified ? json(*e.verified) : json(nullptr);
    list.push_back(std::move(item));
  }
  j["explanations"] = std::move(list);
  if (r.complete) j["complete"] = *r.complete;
  if (!stable) {
    const auto& s = r.stats;
    j["execution"] = {
        {"processors", r.processors},
        {"oracle_calls", s.oracleCalls},
        {"parallel_rounds", s.parallelRounds},
        {"cancelled_calls", s.cancelledCalls},
        {"late_results", s.lateResults},
        {"fd_invocations", s.fdInvocations},
        {"fd_all_necessary", s.fdAllNecessary},
        {"fd_freed", s.fdFreed},
        {"wall_time_ms", std::chrono::duration<double, std::milli>(s.wallTime).count()},
    };
  }
  return j;
}

RunReport reportFromJson(const json& j) {
  try {
    RunReport r;
    const auto& q = j.at("query");
    r.epsilon = q.at("epsilon").get<double>();
    r.norm = q.at("norm").get<std::string>();
    r.kind = q.at("kind").get<std::string>();
    r.algorithm = q.at("algorithm").get<std::string>();
    r.delta = q.at("delta").get<double>();
    r.fdEnabled = q.at("fd").get<bool>();
    r.fdActivation = q.at("fd_activation").get<std::string>();
    r.ordering = q.at("ordering").get<std::vector<FeatureId>>();
    r.seed = q.at("seed").get<std::uint64_t>();
    r.enumerate = q.at("enumerate").get<bool>();
    const auto& o = j.at("oracle");
    r.oracleName = o.at("name").get<std::string>();
    r.oracleExact = o.at("exact").get<bool>();
    r.oracleGeometricWitness = o.at("geometric_witness").get<bool>();
    for (const auto& e : j.at("explanations")) {
      ReportEntry entry;
      entry.kind = kindFromString(e.at("kind").get<std::string>());
      entry.features = e.at("features").get<std::vector<FeatureId>>();
      if (e.contains("verified") && !e["verified"].is_null()) entry.verified = e["verified"].get<bool>();
      r.explanations.push_back(std::move(entry));
    }
    if (j.contains("complete")) r.complete = j["complete"].get<bool>();
    if (j.contains("execution")) {
      const auto& x = j["execution"];
      r.processors = x.at("processors").get<std::size_t>();
      auto& s = r.stats;
      s.oracleCalls = x.at("oracle_calls").get<std::size_t>();
      s.parallelRounds = x.at("parallel_rounds").get<std::size_t>();
      s.cancelledCalls = x.at("cancelled_calls").get<std::size_t>();
      s.lateResults = x.at("late_results").get<std::size_t>();
      s.fdInvocations = x.at("fd_invocations").get<std::size_t>();
      s.fdAllNecessary = x.at("fd_all_necessary").get<std::size_t>();
      s.fdFreed = x.at("fd_freed").get<std::size_t>();
      s.wallTime = std::chrono::duration_cast<std::chrono::nanoseconds>(
          std::chrono::duration<double, std::milli>(x.at("wall_time_ms").get<double>()));
    }
    r.stats.seed = r.seed;
    r.stats.resultSize = r.explanations.size();
    return r;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("report: ") + e.what());
  }
}

std::string renderText(const RunReport& r, bool stable) {
  std::ostringstream out;
  out << "query: kind=" << r.kind << " eps=" << r.epsilon << " norm=" << r.norm
      << " algorithm=" << r.algorithm;
  if (r.fdEnabled) {
    out << " fd=" << r.fdActivation << " delta=" << r.delta;
  } else {
    out << " fd=off";
  }
  out << "\n";
  out << "ordering: " << listStr(r.ordering) << " seed=" << r.seed << "\n";
  out << "oracle: " << r.oracleName << (r.oracleExact ? " (exact)" : " (inexact)") << "\n";
  for (const auto& e : r.explanations) {
    out << lower(e.kind) << " " << listStr(e.features);
    if (e.verified) out << (*e.verified ? "  verified" : "  NOT MINIMAL");
    out << "\n";
  }
  if (r.complete) out << "complete: " << (*r.complete ? "yes" : "no (limit reached)") << "\n";
  if (!stable) {
    const auto& s = r.stats;
    out << "q=" << r.processors << " calls=" << s.oracleCalls << " rounds=" << s.parallelRounds
        << " cancelled=" << s.cancelledCalls;
    if (s.fdInvocations) {
      out << " fd=" << s.fdInvocations << " (freed " << s.fdFreed << ", all-necessary "
          << s.fdAllNecessary << ")";
    }
    out << " time=" << std::chrono::duration<double, std::milli>(s.wallTime).count() << "ms\n";
  }
  return out.str();
}

}  // namespace drxp
