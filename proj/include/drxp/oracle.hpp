#pragma once

#include <stop_token>
#include <string>

#include "drxp/feature_set.hpp"
#include "drxp/problem.hpp"

namespace drxp {

/// A constrained adversarial-example query: features in `fixed` are pinned
/// to the instance values; every point must lie in the epsilon-ball.
struct OracleQuery {
  FeatureSet fixed;
  double epsilon = 1.0;
  Norm norm = Norm::L1;
};

struct OracleVerdict {
  enum class Status { AdvFound, Robust, Cancelled };

  Status status = Status::Robust;
  Point witness;  // set iff AdvFound

  static OracleVerdict adv(Point witness) { return {Status::AdvFound, std::move(witness)}; }
  static OracleVerdict robust() { return {Status::Robust, {}}; }
  static OracleVerdict cancelled() { return {Status::Cancelled, {}}; }

  bool advFound() const noexcept { return status == Status::AdvFound; }
  bool robustAnswer() const noexcept { return status == Status::Robust; }
  bool wasCancelled() const noexcept { return status == Status::Cancelled; }
};

struct OracleTraits {
  std::string name;
  bool exact = true;             // Robust is a proof, not a trusted claim
  bool geometricWitness = true;  // witnesses may be passed to verifyWitness
};

/// The FindAdvEx robustness oracle. Implementations must accept concurrent
/// calls; a call whose stop token fires returns Cancelled promptly.
class Oracle {
 public:
  virtual ~Oracle() = default;

  virtual OracleVerdict findAdvEx(const OracleQuery& query, std::stop_token stop = {}) = 0;
  virtual OracleTraits traits() const = 0;
  virtual std::size_t featureCount() const = 0;
};

/// True iff the witness agrees with v on every fixed feature, lies within
/// epsilon of v, and is classified differently from v.
bool verifyWitness(const ExplanationProblem& problem, const Point& witness, const OracleQuery& query);

/// Throws if the query does not fit an m-feature problem or epsilon <= 0.
void checkQuery(const OracleQuery& query, std::size_t featureCount);

}  // namespace drxp
