#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "json.hpp"

#include "commands.hpp"
#include "drxp/errors.hpp"
#include "drxp/grid_oracle.hpp"
#include "drxp/model_io.hpp"
#include "drxp/msmp.hpp"
#include "drxp/synthetic_oracle.hpp"

namespace drxp::cli {

namespace {

struct BenchCase {
  std::string name;
  std::unique_ptr<Oracle> oracle;
};

struct Row {
  std::string item;
  std::string algorithm;
  std::size_t q = 1;
  std::size_t calls = 0;
  std::size_t rounds = 0;
  std::size_t cancelled = 0;
  double wallMs = 0;
  std::optional<std::size_t> size;  // nullopt when there is no explanation
  std::string set;
  std::size_t fdInvocations = 0;
  std::size_t fdAllNecessary = 0;
};

std::vector<BenchCase> syntheticSuite(const BenchArgs& a) {
  std::vector<BenchCase> suite;
  const auto latency = std::chrono::microseconds(static_cast<std::int64_t>(a.latencyMs * 1000));
  for (std::size_t t = 0; t < a.trials; ++t) {
    auto spec = SyntheticSpec::randomSingletons(a.features, a.breakers, a.seed + t, latency, a.breakerSize);
    suite.push_back({"synthetic#" + std::to_string(t), std::make_unique<SyntheticOracle>(spec)});
  }
  return suite;
}

std::vector<BenchCase> fixtureSuite(const BenchArgs& a) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(a.fixtures)) {
    if (entry.is_regular_file() && entry.path().extension() == ".model") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<BenchCase> suite;
  for (const auto& f : files) {
    auto doc = loadModelFile(f.string());
    if (!doc.instance) {
      std::cerr << "skipping " << f.filename().string() << ": no embedded instance\n";
      continue;
    }
    auto problem = validateExplanationProblem(doc.problem, *doc.instance);
    suite.push_back({f.filename().string(), std::make_unique<GridOracle>(problem)});
  }
  return suite;
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

void printTable(const std::vector<Row>& rows) {
  std::cout << std::left << std::setw(18) << "item" << std::setw(12) << "algorithm" << std::right << std::setw(4)
            << "q" << std::setw(8) << "calls" << std::setw(8) << "rounds" << std::setw(8) << "cancel"
            << std::setw(12) << "wall-ms" << std::setw(6) << "|X|" << std::setw(9) << "fd-nec" << "  set\n";
  for (const auto& r : rows) {
    std::cout << std::left << std::setw(18) << r.item << std::setw(12) << r.algorithm << std::right
              << std::setw(4) << r.q << std::setw(8) << r.calls << std::setw(8) << r.rounds << std::setw(8)
              << r.cancelled << std::setw(12) << fixed(r.wallMs, 1) << std::setw(6)
              << (r.size ? std::to_string(*r.size) : "-") << std::setw(9)
              << (r.fdInvocations ? std::to_string(r.fdAllNecessary) + "/" + std::to_string(r.fdInvocations) : "-")
              << "  " << r.set << "\n";
  }
}

}  // namespace

void addBenchOptions(CLI::App& cmd, BenchArgs& a) {
  auto* syn = cmd.add_flag("--synthetic", a.synthetic, "Synthetic latency oracle with planted breakers");
  cmd.add_option("--features,-m", a.features, "Synthetic feature count")->capture_default_str();
  cmd.add_option("--breakers", a.breakers, "Number of hidden breakers")->capture_default_str();
  cmd.add_option("--breaker-size", a.breakerSize, "Features per breaker")->capture_default_str();
  cmd.add_option("--latency-ms", a.latencyMs, "Simulated oracle latency")->capture_default_str();
  cmd.add_option("--trials", a.trials, "Synthetic instances (seeds seed..seed+trials-1)")->capture_default_str();
  auto* fix = cmd.add_option("--fixtures", a.fixtures, "Directory of .model files with embedded instances")
                  ->check(CLI::ExistingDirectory);
  syn->excludes(fix);
  cmd.add_option("--epsilon,-e", a.epsilon, "Distance bound for fixture suites")->capture_default_str();
  cmd.add_option("--norm,-p", a.norm, "l0 | l1 | l2 | linf")->capture_default_str();
  cmd.add_option("--kind", a.kind, "axp | cxp")->capture_default_str();
  cmd.add_option("--algos", a.algorithms, "Comma-separated algorithms")->delimiter(',')->capture_default_str();
  cmd.add_option("-q,--processors", a.processors, "Comma-separated processor counts for swift")
      ->delimiter(',')
      ->capture_default_str();
  cmd.add_option("--delta", a.delta, "Feature disjunction threshold")->capture_default_str();
  cmd.add_flag("--no-fd", a.noFd, "Disable the feature disjunction check");
  cmd.add_option("--fd-activation", a.fdActivation, "pool-fraction | pool-fraction-within-batch")
      ->capture_default_str();
  cmd.add_option("--seed", a.seed, "Base seed")->capture_default_str();
  cmd.add_option("--json", a.json, "Also write the rows as JSON to this file");
  cmd.add_option("--format", a.format, "Standard output format: text | json")->capture_default_str();
}

int runBench(const BenchArgs& a) {
  try {
    if (a.synthetic == !a.fixtures.empty()) throw std::invalid_argument("choose one of --synthetic or --fixtures");
    if (a.format != "text" && a.format != "json") throw std::invalid_argument("--format must be text or json");
    std::vector<Algorithm> algorithms;
    for (const auto& s : a.algorithms) algorithms.push_back(parseAlgorithm(s));
    auto suite = a.synthetic ? syntheticSuite(a) : fixtureSuite(a);
    if (suite.empty() || algorithms.empty() || a.processors.empty()) {
      std::cerr << "error: empty benchmark suite\n";
      return kUsage;
    }

    RunConfig base;
    base.kind = a.kind == "cxp" ? ExplanationKind::CXp : ExplanationKind::AXp;
    if (a.kind != "axp" && a.kind != "cxp") throw std::invalid_argument("--kind must be axp or cxp");
    base.epsilon = a.epsilon;
    base.norm = parseNorm(a.norm);
    base.seed = a.seed;
    base.fdThreshold = a.delta;
    base.fdEnabled = !a.noFd;
    base.fdActivation = parseFdActivation(a.fdActivation);

    std::vector<Row> rows;
    for (auto& c : suite) {
      for (auto algo : algorithms) {
        // Deletion and dichotomic search are sequential; q only matters for swift.
        std::vector<std::size_t> qs = algo == Algorithm::Swift ? a.processors : std::vector<std::size_t>{1};
        for (auto q : qs) {
          RunConfig config = base;
          config.processors = q;
          Row row{c.name, std::string(algorithmName(algo)), q};
          try {
            auto r = extractExplanation(*c.oracle, config, algo);
            row.calls = r.stats.oracleCalls;
            row.rounds = r.stats.parallelRounds;
            row.cancelled = r.stats.cancelledCalls;
            row.wallMs = std::chrono::duration<double, std::milli>(r.stats.wallTime).count();
            row.size = r.set.size();
            row.set = r.set.str();
            row.fdInvocations = r.stats.fdInvocations;
            row.fdAllNecessary = r.stats.fdAllNecessary;
          } catch (const NoExplanation&) {
            row.set = "none";
          }
          rows.push_back(row);
        }
      }
    }

    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows) {
      out.push_back({{"item", r.item},
                     {"algorithm", r.algorithm},
                     {"q", r.q},
                     {"oracle_calls", r.calls},
                     {"parallel_rounds", r.rounds},
                     {"cancelled_calls", r.cancelled},
                     {"wall_time_ms", r.wallMs},
                     {"size", r.size ? nlohmann::json(*r.size) : nlohmann::json(nullptr)},
                     {"set", r.set},
                     {"fd_invocations", r.fdInvocations},
                     {"fd_all_necessary", r.fdAllNecessary}});
    }
    if (a.format == "json") {
      std::cout << out.dump(2) << "\n";
    } else {
      printTable(rows);
    }
    if (!a.json.empty()) {
      std::ofstream file(a.json);
      if (!file) throw std::runtime_error("cannot write " + a.json);
      file << out.dump(2) << "\n";
    }
    return kOk;
  } catch (const OracleFailure& e) {
    std::cerr << "oracle failure: " << e.what() << "\n";
    return kOracleFailure;
  } catch (const OracleInconsistency& e) {
    std::cerr << "oracle failure: " << e.what() << "\n";
    return kOracleFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace drxp::cli
