#include "test_support.hpp"

#include <algorithm>

namespace drxp::testing {

std::string fixturePath(const std::string& name) { return std::string(DRXP_FIXTURE_DIR) + "/" + name; }

ExplanationProblem loadFixture(const std::string& name) {
  auto doc = loadModelFile(fixturePath(name));
  return validateExplanationProblem(doc.problem, *doc.instance);
}

OracleVerdict RecordingOracle::findAdvEx(const OracleQuery& query, std::stop_token stop) {
  {
    std::lock_guard lock(mu_);
    log_.push_back(query.fixed);
  }
  return inner_.findAdvEx(query, stop);
}

std::vector<FeatureSet> RecordingOracle::log() const {
  std::lock_guard lock(mu_);
  return log_;
}

void RecordingOracle::clear() {
  std::lock_guard lock(mu_);
  log_.clear();
}

ExplanationProblem randomLookupProblem(std::mt19937_64& rng, std::size_t maxFeatures, std::size_t maxDomain) {
  const std::vector<double> pool{0, 0.5, 1, 1.5, 2};
  const std::size_t m = std::uniform_int_distribution<std::size_t>(1, maxFeatures)(rng);
  std::vector<FeatureDomain> domains;
  std::vector<std::vector<double>> values;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t size = std::uniform_int_distribution<std::size_t>(1, maxDomain)(rng);
    auto shuffled = pool;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<double> vals(shuffled.begin(), shuffled.begin() + static_cast<long>(size));
    std::sort(vals.begin(), vals.end());
    values.push_back(vals);
    domains.push_back(FeatureDomain::discrete(vals));
  }
  const std::size_t classes = std::uniform_int_distribution<std::size_t>(2, 3)(rng);
  std::vector<std::string> names;
  for (std::size_t c = 0; c < classes; ++c) names.push_back("c" + std::to_string(c));

  LookupTable table;
  table.defaultClass = std::uniform_int_distribution<std::size_t>(0, classes - 1)(rng);
  // Up to 8 exceptions at random grid points; repeats overwrite.
  std::uniform_int_distribution<std::size_t> cls(0, classes - 1);
  const std::size_t exceptions = std::uniform_int_distribution<std::size_t>(0, 8)(rng);
  for (std::size_t e = 0; e < exceptions; ++e) {
    Point x(m);
    for (std::size_t i = 0; i < m; ++i) {
      x[i] = values[i][std::uniform_int_distribution<std::size_t>(0, values[i].size() - 1)(rng)];
    }
    table.entries[x] = cls(rng);
  }
  ClassificationProblem problem(domains, names, table);
  Point v(m);
  for (std::size_t i = 0; i < m; ++i) {
    v[i] = values[i][std::uniform_int_distribution<std::size_t>(0, values[i].size() - 1)(rng)];
  }
  const ClassId label = problem.classify(v);
  return validateExplanationProblem(problem, {v, label});
}

RandomCase randomCase(std::mt19937_64& rng, std::size_t maxFeatures, std::size_t maxDomain) {
  auto problem = randomLookupProblem(rng, maxFeatures, maxDomain);
  const Norm norms[] = {Norm::L0, Norm::L1, Norm::Linf};
  const Norm norm = norms[std::uniform_int_distribution<int>(0, 2)(rng)];
  const double l0Grid[] = {1, 2, 3};
  const double grid[] = {0.5, 1, 2};
  const int k = std::uniform_int_distribution<int>(0, 2)(rng);
  return {std::move(problem), norm == Norm::L0 ? l0Grid[k] : grid[k], norm};
}

FeatureSet maskToSet(std::size_t m, std::uint64_t mask) {
  FeatureSet s(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (mask >> i & 1U) s.insert(i + 1);
  }
  return s;
}

std::vector<FeatureSet> allSubsets(std::size_t m) {
  std::vector<FeatureSet> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) out.push_back(maskToSet(m, mask));
  return out;
}

}  // namespace drxp::testing
