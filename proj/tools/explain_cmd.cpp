#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <thread>

#include "commands.hpp"
#include "drxp/enumeration.hpp"
#include "drxp/errors.hpp"
#include "drxp/external_oracle.hpp"
#include "drxp/grid_oracle.hpp"
#include "drxp/model_io.hpp"
#include "drxp/report.hpp"

namespace drxp::cli {

namespace {

std::size_t defaultProcessors() { return std::max(1U, std::thread::hardware_concurrency()); }

SeedPreference parsePreference(const std::string& s) {
  if (s == "maximal") return SeedPreference::Maximal;
  if (s == "minimal") return SeedPreference::Minimal;
  if (s == "random") return SeedPreference::Random;
  throw std::invalid_argument("unknown seed preference '" + s + "'");
}

ExplanationKind parseKind(const std::string& s) {
  if (s == "axp") return ExplanationKind::AXp;
  if (s == "cxp") return ExplanationKind::CXp;
  throw std::invalid_argument("unknown explanation kind '" + s + "'");
}

std::filesystem::path defaultReportPath(const std::string& model) {
  std::filesystem::path p(model);
  return p.parent_path() / (p.stem().string() + ".report.json");
}

}  // namespace

void addExplainOptions(CLI::App& cmd, ExplainArgs& a) {
  cmd.add_option("--model", a.model, "Model document")->required()->check(CLI::ExistingFile);
  cmd.add_option("--instance", a.instance, "Instance as v1,...,vm:c (defaults to the one embedded in the model)");
  cmd.add_option("--epsilon,-e", a.epsilon, "Distance bound")->required();
  cmd.add_option("--norm,-p", a.norm, "l0 | l1 | l2 | linf")->capture_default_str();
  cmd.add_option("--kind", a.kind, "axp | cxp")->capture_default_str();
  cmd.add_option("--algo", a.algorithm, "deletion | dichotomic | swift")->capture_default_str();
  cmd.add_option("-q,--processors", a.processors, "Concurrent oracle calls (default: hardware threads)");
  cmd.add_option("--delta", a.delta, "Feature disjunction threshold in [0,1]")->capture_default_str();
  cmd.add_flag("--no-fd", a.noFd, "Disable the feature disjunction check");
  cmd.add_option("--fd-activation", a.fdActivation, "pool-fraction | pool-fraction-within-batch")
      ->capture_default_str();
  cmd.add_option("--order", a.order, "Feature ordering, e.g. 3,1,2")->delimiter(',');
  cmd.add_flag("--random-order", a.randomOrder, "Seeded random feature ordering");
  cmd.add_option("--seed", a.seed, "Seed for random ordering and FD choices")->capture_default_str();
  cmd.add_flag("--enumerate", a.enumerate, "Enumerate all AXps and CXps");
  cmd.add_option("--limit", a.limit, "Stop enumeration after this many explanations (0 = all)");
  cmd.add_option("--seed-preference", a.seedPreference, "maximal | minimal | random")->capture_default_str();
  cmd.add_option("--oracle", a.oracle, "grid | external (default: external iff DRXP_ORACLE_CMD is set)");
  cmd.add_option("--out,-o", a.out, "Report file; '-' for none (default: <model>.report.json beside the model)");
  cmd.add_option("--format", a.format, "Standard output format: text | json")->capture_default_str();
  cmd.add_flag("--no-verify", a.noVerify, "Skip the minimality check of results");
  cmd.add_flag("--stable", a.stable, "Omit run-dependent statistics from the report");
}

int runExplain(const ExplainArgs& a) {
  try {
    if (a.format != "text" && a.format != "json") throw std::invalid_argument("--format must be text or json");
    auto doc = loadModelFile(a.model);
    Instance instance;
    if (!a.instance.empty()) {
      instance = parseInstance(a.instance, doc.problem);
    } else if (doc.instance) {
      instance = *doc.instance;
    } else {
      throw std::invalid_argument("no --instance given and the model embeds none");
    }
    auto problem = validateExplanationProblem(doc.problem, instance);
    const std::size_t m = problem.featureCount();

    RunConfig config;
    config.kind = parseKind(a.kind);
    config.epsilon = *a.epsilon;
    config.norm = parseNorm(a.norm);
    config.ordering.assign(a.order.begin(), a.order.end());
    config.randomOrdering = a.randomOrder;
    config.seed = a.seed;
    config.processors = a.processors == 0 ? defaultProcessors() : a.processors;
    config.fdThreshold = a.delta;
    config.fdEnabled = !a.noFd;
    config.fdActivation = parseFdActivation(a.fdActivation);
    const Algorithm algorithm = parseAlgorithm(a.algorithm);
    validateRunConfig(config, m);

    std::string oracleKind = a.oracle;
    const char* command = std::getenv(kOracleCommandEnv);
    if (oracleKind.empty()) oracleKind = command && *command ? "external" : "grid";
    std::unique_ptr<Oracle> oracle;
    if (oracleKind == "grid") {
      oracle = std::make_unique<GridOracle>(problem);
    } else if (oracleKind == "external") {
      if (!command || !*command) throw std::invalid_argument(std::string(kOracleCommandEnv) + " is not set");
      oracle = std::make_unique<ExternalOracle>(command, problem, config.norm);
    } else {
      throw std::invalid_argument("--oracle must be grid or external");
    }

    RunReport report;
    report.epsilon = config.epsilon;
    report.norm = std::string(normName(config.norm));
    report.kind = a.enumerate ? "both" : std::string(kindName(config.kind));
    report.algorithm = std::string(algorithmName(algorithm));
    report.delta = config.fdThreshold;
    report.fdEnabled = config.fdEnabled;
    report.fdActivation = std::string(fdActivationName(config.fdActivation));
    report.ordering = resolveOrdering(config, m);
    report.seed = config.seed;
    report.enumerate = a.enumerate;
    const auto traits = oracle->traits();
    report.oracleName = traits.name;
    report.oracleExact = traits.exact;
    report.oracleGeometricWitness = traits.geometricWitness;
    report.processors = config.processors;

    auto verify = [&](ExplanationKind kind, const FeatureSet& s) -> std::optional<bool> {
      if (a.noVerify) return std::nullopt;
      MonotonePredicate pred(*oracle, kind, config.epsilon, config.norm);
      return verifyMinimal(pred, s);
    };

    if (a.enumerate) {
      EnumerationOptions opt;
      opt.config = config;
      opt.algorithm = algorithm;
      opt.limit = a.limit;
      opt.preference = parsePreference(a.seedPreference);
      auto result = enumerateExplanations(*oracle, opt);
      for (const auto& e : result.stream) report.explanations.push_back({e.kind, e.set.members(), verify(e.kind, e.set)});
      report.complete = result.axps.complete;
      report.stats = result.stats;
    } else {
      auto result = extractExplanation(*oracle, config, algorithm);
      report.explanations.push_back({config.kind, result.set.members(), verify(config.kind, result.set)});
      report.stats = result.stats;
    }

    const auto json = reportToJson(report, a.stable);
    if (a.format == "json") {
      std::cout << json.dump(2) << "\n";
    } else {
      std::cout << renderText(report, a.stable);
    }
    if (a.out != "-") {
      const auto path = a.out.empty() ? defaultReportPath(a.model) : std::filesystem::path(a.out);
      std::ofstream file(path);
      if (!file) throw std::runtime_error("cannot write report to " + path.string());
      file << json.dump(2) << "\n";
    }

    for (const auto& e : report.explanations) {
      if (e.verified && !*e.verified) {
        std::cerr << "error: a reported explanation failed the minimality check; the oracle is inconsistent\n";
        return kOracleFailure;
      }
    }
    return kOk;
  } catch (const NoExplanation& e) {
    std::cerr << "no explanation: " << e.what() << "\n";
    return kNoExplanation;
  } catch (const OracleFailure& e) {
    std::cerr << "oracle failure: " << e.what() << "\n";
    return kOracleFailure;
  } catch (const OracleInconsistency& e) {
    std::cerr << "oracle failure: " << e.what() << "\n";
    return kOracleFailure;
  } catch (const CombinatorialLimit& e) {
    std::cerr << "oracle failure: " << e.what() << "\n";
    return kOracleFailure;
  } catch (const Unsupported& e) {
    std::cerr << "oracle failure: " << e.what() << "\n";
    return kOracleFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace drxp::cli
