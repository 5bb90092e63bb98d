#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "drxp/msmp.hpp"

namespace drxp {

struct ExplanationFamily {
  ExplanationKind kind = ExplanationKind::AXp;
  std::vector<FeatureSet> sets;  // canonical order
  bool complete = false;
};

/// All subset-minimal hitting sets of `family` over {1..universe}. An empty
/// family yields {{}}; a family containing the empty set yields nothing.
std::vector<FeatureSet> minimalHittingSets(const std::vector<FeatureSet>& family,
                                           std::size_t universe, std::size_t cap = 1'000'000);

/// Both families must be complete (IncompleteFamily otherwise).
bool checkDuality(const ExplanationFamily& axps, const ExplanationFamily& cxps);

struct BruteForceResult {
  ExplanationFamily axps;
  ExplanationFamily cxps;
};

inline constexpr std::size_t kBruteForceFeatureCap = 14;

/// Evaluates the weak predicates on all 2^m subsets.
BruteForceResult bruteForceEnumerate(Oracle& oracle, double epsilon, Norm norm,
                                     std::size_t cap = kBruteForceFeatureCap);

enum class SeedPreference { Maximal, Minimal, Random };

/// Generates fixed-feature seeds that avoid every explored region.
/// Positive clauses: some member of a found CXp is fixed.
/// Negative clauses: some member of a found AXp is free.
class SeedEngine {
 public:
  SeedEngine(std::size_t universe, SeedPreference preference, std::uint64_t seed = 0,
             std::size_t clauseCap = 100'000);

  void blockAxp(const FeatureSet& axp);
  void blockCxp(const FeatureSet& cxp);

  /// Next unexplored seed (as a fixed set), or nullopt when exhausted.
  std::optional<FeatureSet> next();

  bool satisfies(const FeatureSet& seed) const;
  std::size_t clauseCount() const noexcept { return positive_.size() + negative_.size(); }

 private:
  bool search(std::vector<int>& assign, std::size_t depth);
  bool consistent(const std::vector<int>& assign) const;

  std::size_t universe_;
  SeedPreference preference_;
  std::mt19937_64 rng_;
  std::size_t clauseCap_;
  std::vector<FeatureSet> positive_;
  std::vector<FeatureSet> negative_;
  std::vector<FeatureId> varOrder_;
};

struct EnumerationOptions {
  RunConfig config;  // epsilon, norm, ordering, q, FD settings for shrinking
  Algorithm algorithm = Algorithm::Deletion;
  std::size_t limit = 0;  // 0 = unbounded
  SeedPreference preference = SeedPreference::Maximal;
  std::size_t clauseCap = 100'000;
};

struct Enumerated {
  ExplanationKind kind;
  FeatureSet set;
};

struct EnumerationResult {
  std::vector<Enumerated> stream;  // discovery order
  ExplanationFamily axps;
  ExplanationFamily cxps;
  RunStats stats;
};

/// MARCO-style dual enumeration of AXps and CXps. The callback, if given,
/// sees each explanation as soon as it is found.
EnumerationResult enumerateExplanations(Oracle& oracle, const EnumerationOptions& options,
                                        const std::function<void(const Enumerated&)>& onFound = {});

}  // namespace drxp
