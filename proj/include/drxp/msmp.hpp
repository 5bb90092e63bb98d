#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "drxp/feature_set.hpp"
#include "drxp/oracle.hpp"
#include "drxp/parallel_exec.hpp"

namespace drxp {

enum class ExplanationKind { AXp, CXp };

std::string_view kindName(ExplanationKind kind);

struct RunStats {
  std::size_t oracleCalls = 0;
  std::size_t parallelRounds = 0;  // sequential calls count one round each
  std::size_t cancelledCalls = 0;
  std::size_t lateResults = 0;
  std::size_t resultSize = 0;
  std::size_t fdInvocations = 0;
  std::size_t fdAllNecessary = 0;
  std::size_t fdFreed = 0;
  std::uint64_t seed = 0;
  std::chrono::nanoseconds wallTime{0};

  void absorb(const BatchOutcome& outcome);
  RunStats& operator+=(const RunStats& other);
};

/// WAXp (kind AXp: pi(S) iff no AEx with S fixed) or WCXp (kind CXp:
/// pi(Y) iff an AEx exists with F\Y fixed), evaluated through an oracle.
/// Monotone increasing under set inclusion.
class MonotonePredicate {
 public:
  MonotonePredicate(Oracle& oracle, ExplanationKind kind, double epsilon, Norm norm);

  /// Sequential evaluation: one oracle call, one round.
  bool operator()(const FeatureSet& s);

  OracleQuery queryFor(const FeatureSet& s) const;
  bool interpret(const OracleVerdict& verdict) const;
  Polarity polarity() const noexcept;

  ExplanationKind kind() const noexcept { return kind_; }
  std::size_t universe() const noexcept { return universe_; }
  Oracle& oracle() noexcept { return oracle_; }
  RunStats& stats() noexcept { return stats_; }
  const RunStats& stats() const noexcept { return stats_; }

 private:
  Oracle& oracle_;
  ExplanationKind kind_;
  double epsilon_;
  Norm norm_;
  std::size_t universe_;
  RunStats stats_;
};

/// When SwiftXplain switches from parallel dichotomic narrowing to the
/// feature disjunction check (after which it never switches back).
enum class FdActivation {
  PoolFraction,             // |W| <= (1 - delta) * m
  PoolFractionWithinBatch,  // additionally |W| <= q, so T covers all of W
};

std::string_view fdActivationName(FdActivation rule);
FdActivation parseFdActivation(std::string_view text);

struct RunConfig {
  ExplanationKind kind = ExplanationKind::AXp;
  double epsilon = 1.0;
  Norm norm = Norm::L1;
  std::vector<FeatureId> ordering;  // explicit permutation; empty = identity or seeded random
  bool randomOrdering = false;
  std::uint64_t seed = 0;
  std::size_t processors = 1;
  double fdThreshold = 0.75;
  bool fdEnabled = true;
  FdActivation fdActivation = FdActivation::PoolFractionWithinBatch;
};

/// Throws std::invalid_argument on q < 1, delta outside [0,1], epsilon <= 0
/// or an ordering that is not a permutation of 1..m.
void validateRunConfig(const RunConfig& config, std::size_t m);
std::vector<FeatureId> resolveOrdering(const RunConfig& config, std::size_t m);

/// Throws NoExplanation unless pred(set) holds. Skipped (no oracle call) for
/// abductive mode on the full universe, where it holds trivially.
void requireSatisfied(MonotonePredicate& pred, const FeatureSet& set);

/// Deletion: one oracle call per candidate, from the back of the order, so
/// the result keeps early-ranked features (as dichotomic search does).
/// `order` lists the candidate universe; pred(set(order)) must hold.
FeatureSet deletionExtract(MonotonePredicate& pred, std::span<const FeatureId> order);

/// Sequential dichotomic search. Each outer iteration first tests pred(S);
/// if it fails, binary search over the prefixes of W locates a transition
/// feature and discards the suffix behind it.
FeatureSet dichotomicExtract(MonotonePredicate& pred, std::span<const FeatureId> order);

/// Minimal j in 0..|W| with pred(S u W[1..j]), given pred(S u W). Each round
/// probes up to q prefixes concurrently and narrows the bracket.
std::size_t findTransitionPrefix(MonotonePredicate& pred, const FeatureSet& s,
                                 std::span<const FeatureId> w, std::size_t q, WorkerPool& pool);

struct FdOutcome {
  std::vector<FeatureId> tested;     // T
  std::optional<FeatureId> freed;    // set unless every member of T is necessary
  bool allNecessary() const noexcept { return !freed.has_value(); }
};

/// Parallel feature disjunction check over the last min(q, |W|) features.
FdOutcome featDisjunct(MonotonePredicate& pred, const FeatureSet& s, std::span<const FeatureId> w,
                       std::size_t q, WorkerPool& pool, std::mt19937_64& rng);

/// Parallel dichotomic search with optional feature disjunction. With q = 1
/// and FD off it issues exactly the oracle calls of dichotomicExtract.
FeatureSet swiftXplain(MonotonePredicate& pred, std::span<const FeatureId> order,
                       const RunConfig& config, WorkerPool& pool);
FeatureSet swiftXplain(MonotonePredicate& pred, std::span<const FeatureId> order,
                       const RunConfig& config);

/// pred(S) and no single removal keeps pred; |S| + 1 oracle calls.
bool verifyMinimal(MonotonePredicate& pred, const FeatureSet& s);

enum class Algorithm { Deletion, Dichotomic, Swift };

std::string_view algorithmName(Algorithm algorithm);
Algorithm parseAlgorithm(std::string_view text);

struct Extraction {
  FeatureSet set;
  RunStats stats;
};

/// One explanation of the configured kind over the full feature set,
/// including the contrastive feasibility pre-check.
Extraction extractExplanation(Oracle& oracle, const RunConfig& config, Algorithm algorithm);

}  // namespace drxp
