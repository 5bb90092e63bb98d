#pragma once

#include <cstdint>
#include <vector>

#include "drxp/oracle.hpp"

namespace drxp {

/// Exact oracle: depth-first enumeration of every point that agrees with v on
/// the fixed features and lies in the epsilon-ball, in lexicographic order of
/// domain-value indices. Partial distances prune the search.
class GridOracle final : public Oracle {
 public:
  static constexpr std::uint64_t kDefaultCandidateCap = 10'000'000;
  static constexpr std::uint64_t kStopCheckInterval = 10'000;

  explicit GridOracle(ExplanationProblem problem, std::uint64_t candidateCap = kDefaultCandidateCap);

  OracleVerdict findAdvEx(const OracleQuery& query, std::stop_token stop = {}) override;
  OracleTraits traits() const override { return {"grid", true, true}; }
  std::size_t featureCount() const override { return problem_.featureCount(); }

  /// Every adversarial example for the query, in enumeration order.
  std::vector<Point> allWitnesses(const OracleQuery& query);

  const ExplanationProblem& problem() const noexcept { return problem_; }

 private:
  ExplanationProblem problem_;
  std::uint64_t cap_;
  std::vector<std::vector<double>> values_;  // candidate values per feature, empty if not enumerable
};

}  // namespace drxp
