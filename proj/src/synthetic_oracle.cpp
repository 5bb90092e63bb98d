#include "drxp/synthetic_oracle.hpp"

#include <algorithm>
#include <condition_variable>
#include <mutex>
#include <numeric>
#include <random>

#include "drxp/errors.hpp"

namespace drxp {

SyntheticSpec SyntheticSpec::randomSingletons(std::size_t m, std::size_t count, std::uint64_t seed,
                                              std::chrono::microseconds latency, std::size_t breakerSize) {
  if (count * breakerSize > m) throw std::invalid_argument("not enough features for disjoint breakers");
  std::vector<FeatureId> ids(m);
  std::iota(ids.begin(), ids.end(), FeatureId{1});
  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  SyntheticSpec spec;
  spec.featureCount = m;
  spec.latency = latency;
  spec.seed = seed;
  for (std::size_t b = 0; b < count; ++b) {
    FeatureSet s(m);
    for (std::size_t k = 0; k < breakerSize; ++k) s.insert(ids[b * breakerSize + k]);
    spec.hiddenBreakers.push_back(std::move(s));
  }
  return spec;
}

void validateSyntheticSpec(const SyntheticSpec& spec) {
  if (spec.featureCount == 0) throw std::invalid_argument("synthetic spec needs m >= 1");
  for (std::size_t a = 0; a < spec.hiddenBreakers.size(); ++a) {
    const auto& s = spec.hiddenBreakers[a];
    if (s.universe() != spec.featureCount) throw DimensionMismatch("breaker universe differs from m");
    if (s.empty()) throw std::invalid_argument("hidden breakers must be nonempty");
    for (std::size_t b = 0; b < spec.hiddenBreakers.size(); ++b) {
      if (a != b && s.isSubsetOf(spec.hiddenBreakers[b])) {
        throw std::invalid_argument("hidden breakers must form an antichain");
      }
    }
  }
}

SyntheticOracle::SyntheticOracle(SyntheticSpec spec) : spec_(std::move(spec)) { validateSyntheticSpec(spec_); }

OracleVerdict SyntheticOracle::findAdvEx(const OracleQuery& query, std::stop_token stop) {
  checkQuery(query, spec_.featureCount);
  if (spec_.latency.count() > 0) {
    std::mutex m;
    std::condition_variable_any cv;
    std::unique_lock lock(m);
    cv.wait_for(lock, stop, spec_.latency, [] { return false; });
  }
  if (stop.stop_requested()) return OracleVerdict::cancelled();
  for (const auto& breaker : spec_.hiddenBreakers) {
    if (!breaker.intersects(query.fixed)) {
      Point marker(spec_.featureCount, 0.0);
      for (FeatureId i : breaker.members()) marker[i - 1] = 1.0;
      return OracleVerdict::adv(std::move(marker));
    }
  }
  return OracleVerdict::robust();
}

}  // namespace drxp
