#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

#include "drxp/oracle.hpp"

namespace drxp {

/// A monotone oracle with planted structure: an adversarial example exists
/// iff some hidden breaker set is entirely free.
struct SyntheticSpec {
  std::size_t featureCount = 0;
  std::vector<FeatureSet> hiddenBreakers;  // nonempty antichain
  std::chrono::microseconds latency{0};
  std::uint64_t seed = 0;

  /// `count` disjoint breakers of `breakerSize` features drawn uniformly.
  static SyntheticSpec randomSingletons(std::size_t m, std::size_t count, std::uint64_t seed,
                                        std::chrono::microseconds latency = {},
                                        std::size_t breakerSize = 1);
};

void validateSyntheticSpec(const SyntheticSpec& spec);

class SyntheticOracle final : public Oracle {
 public:
  explicit SyntheticOracle(SyntheticSpec spec);

  /// Sleeps for the configured latency (cancellable), then answers. The
  /// witness is a marker: 1.0 on the coordinates of the first free breaker.
  OracleVerdict findAdvEx(const OracleQuery& query, std::stop_token stop = {}) override;
  OracleTraits traits() const override { return {"synthetic", true, false}; }
  std::size_t featureCount() const override { return spec_.featureCount; }

  const SyntheticSpec& spec() const noexcept { return spec_; }

 private:
  SyntheticSpec spec_;
};

}  // namespace drxp
