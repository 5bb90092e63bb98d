#include "drxp/enumeration.hpp"

#include <algorithm>
#include <memory>

#include "drxp/errors.hpp"

namespace drxp {

namespace {

/// Branch-and-bound over the unhit sets. Elements in `banned` are excluded
/// in this branch, so each hitting set is produced by at most one branch.
class HittingSetSearch {
 public:
  HittingSetSearch(const std::vector<FeatureSet>& family, std::size_t universe, std::size_t cap)
      : family_(family), universe_(universe), cap_(cap) {}

  std::vector<FeatureSet> run() {
    FeatureSet h(universe_);
    FeatureSet banned(universe_);
    recurse(h, banned);
    return canonical(std::move(found_));
  }

 private:
  // Every member of h must still be the only element of h in some set.
  bool everyMemberPrivate(const FeatureSet& h) const {
    for (FeatureId e : h.members()) {
      bool priv = false;
      for (const auto& s : family_) {
        if (s.contains(e) && (s & h).size() == 1) {
          priv = true;
          break;
        }
      }
      if (!priv) return false;
    }
    return true;
  }

  void recurse(FeatureSet& h, FeatureSet banned) {
    if (!everyMemberPrivate(h)) return;
    const FeatureSet* pick = nullptr;
    std::size_t best = 0;
    for (const auto& s : family_) {
      if (s.intersects(h)) continue;
      const auto open = s.minus(banned).size();
      if (open == 0) return;  // cannot be hit in this branch
      if (!pick || open < best) {
        pick = &s;
        best = open;
      }
    }
    if (!pick) {
      if (found_.size() >= cap_) throw CombinatorialLimit("minimal hitting set count exceeds cap");
      found_.push_back(h);
      return;
    }
    for (FeatureId e : pick->minus(banned).members()) {
      h.insert(e);
      recurse(h, banned);
      h.erase(e);
      banned.insert(e);
    }
  }

  const std::vector<FeatureSet>& family_;
  std::size_t universe_;
  std::size_t cap_;
  std::vector<FeatureSet> found_;
};

}  // namespace

std::vector<FeatureSet> minimalHittingSets(const std::vector<FeatureSet>& family, std::size_t universe,
                                           std::size_t cap) {
  for (const auto& s : family) {
    if (s.universe() != universe) throw DimensionMismatch("family set universe differs from m");
    if (s.empty()) return {};
  }
  // Only the subset-minimal members of the family constrain hitting sets.
  std::vector<FeatureSet> reduced;
  const auto sorted = canonical(family);
  for (const auto& s : sorted) {
    const bool dominated = std::any_of(reduced.begin(), reduced.end(),
                                       [&s](const FeatureSet& r) { return r.isSubsetOf(s); });
    if (!dominated) reduced.push_back(s);
  }
  return HittingSetSearch(reduced, universe, cap).run();
}

bool checkDuality(const ExplanationFamily& axps, const ExplanationFamily& cxps) {
  if (!axps.complete || !cxps.complete) throw IncompleteFamily("duality needs complete families");
  std::size_t m = 0;
  for (const auto* fam : {&axps, &cxps}) {
    for (const auto& s : fam->sets) m = s.universe();
  }
  if (m == 0) {
    // No set carries a universe; only {{}} vs {} style families remain.
    return false;
  }
  const auto a = canonical(axps.sets);
  const auto c = canonical(cxps.sets);
  return a == minimalHittingSets(c, m) && c == minimalHittingSets(a, m);
}

BruteForceResult bruteForceEnumerate(Oracle& oracle, double epsilon, Norm norm, std::size_t cap) {
  const std::size_t m = oracle.featureCount();
  if (m > cap || m >= 63) {
    throw CombinatorialLimit("brute-force enumeration limited to " + std::to_string(cap) + " features");
  }
  const std::uint64_t total = std::uint64_t{1} << m;
  auto toSet = [m](std::uint64_t mask) {
    FeatureSet s(m);
    for (std::size_t i = 0; i < m; ++i) {
      if (mask >> i & 1U) s.insert(i + 1);
    }
    return s;
  };

  std::vector<char> waxp(total);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    const auto verdict = oracle.findAdvEx({toSet(mask), epsilon, norm});
    if (verdict.wasCancelled()) throw OracleFailure("oracle call was cancelled");
    waxp[mask] = verdict.robustAnswer();
  }
  const std::uint64_t all = total - 1;
  auto wcxp = [&](std::uint64_t mask) { return !waxp[all & ~mask]; };

  BruteForceResult out;
  out.axps = {ExplanationKind::AXp, {}, true};
  out.cxps = {ExplanationKind::CXp, {}, true};
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    bool minA = waxp[mask];
    bool minC = wcxp(mask);
    for (std::size_t i = 0; i < m && (minA || minC); ++i) {
      if (!(mask >> i & 1U)) continue;
      const auto sub = mask & ~(std::uint64_t{1} << i);
      if (waxp[sub]) minA = false;
      if (wcxp(sub)) minC = false;
    }
    if (minA) out.axps.sets.push_back(toSet(mask));
    if (minC) out.cxps.sets.push_back(toSet(mask));
  }
  out.axps.sets = canonical(std::move(out.axps.sets));
  out.cxps.sets = canonical(std::move(out.cxps.sets));
  return out;
}

SeedEngine::SeedEngine(std::size_t universe, SeedPreference preference, std::uint64_t seed,
                       std::size_t clauseCap)
    : universe_(universe), preference_(preference), rng_(seed), clauseCap_(clauseCap) {
  for (FeatureId i = 1; i <= universe; ++i) varOrder_.push_back(i);
}

void SeedEngine::blockAxp(const FeatureSet& axp) {
  if (clauseCount() >= clauseCap_) throw SeedEngineOverflow("seed engine clause cap reached");
  negative_.push_back(axp);
}

void SeedEngine::blockCxp(const FeatureSet& cxp) {
  if (clauseCount() >= clauseCap_) throw SeedEngineOverflow("seed engine clause cap reached");
  positive_.push_back(cxp);
}

bool SeedEngine::satisfies(const FeatureSet& seed) const {
  for (const auto& c : positive_) {
    if (!c.intersects(seed)) return false;
  }
  for (const auto& c : negative_) {
    if (c.isSubsetOf(seed)) return false;
  }
  return true;
}

// assign: -1 unassigned, 0 free, 1 fixed. A clause is falsified once every
// literal is assigned false.
bool SeedEngine::consistent(const std::vector<int>& assign) const {
  for (const auto& c : positive_) {
    bool dead = true;
    for (FeatureId i : c.members()) {
      if (assign[i] != 0) {
        dead = false;
        break;
      }
    }
    if (dead) return false;
  }
  for (const auto& c : negative_) {
    bool dead = true;
    for (FeatureId i : c.members()) {
      if (assign[i] != 1) {
        dead = false;
        break;
      }
    }
    if (dead) return false;
  }
  return true;
}

bool SeedEngine::search(std::vector<int>& assign, std::size_t depth) {
  if (!consistent(assign)) return false;
  if (depth == varOrder_.size()) return true;
  const FeatureId var = varOrder_[depth];
  int first = 1;
  if (preference_ == SeedPreference::Minimal) first = 0;
  if (preference_ == SeedPreference::Random) first = static_cast<int>(rng_() & 1U);
  for (int value : {first, 1 - first}) {
    assign[var] = value;
    if (search(assign, depth + 1)) return true;
  }
  assign[var] = -1;
  return false;
}

std::optional<FeatureSet> SeedEngine::next() {
  std::vector<int> assign(universe_ + 1, -1);
  if (!search(assign, 0)) return std::nullopt;
  FeatureSet seed(universe_);
  for (FeatureId i = 1; i <= universe_; ++i) {
    if (assign[i] == 1) seed.insert(i);
  }
  return seed;
}

EnumerationResult enumerateExplanations(Oracle& oracle, const EnumerationOptions& options,
                                        const std::function<void(const Enumerated&)>& onFound) {
  const std::size_t m = oracle.featureCount();
  const auto& config = options.config;
  const auto order = resolveOrdering(config, m);
  MonotonePredicate waxp(oracle, ExplanationKind::AXp, config.epsilon, config.norm);
  MonotonePredicate wcxp(oracle, ExplanationKind::CXp, config.epsilon, config.norm);
  SeedEngine engine(m, options.preference, config.seed, options.clauseCap);
  std::unique_ptr<WorkerPool> pool;
  if (options.algorithm == Algorithm::Swift) pool = std::make_unique<WorkerPool>(config.processors);

  auto shrink = [&](MonotonePredicate& pred, const FeatureSet& within) {
    std::vector<FeatureId> sub;
    for (auto i : order) {
      if (within.contains(i)) sub.push_back(i);
    }
    switch (options.algorithm) {
      case Algorithm::Deletion: return deletionExtract(pred, sub);
      case Algorithm::Dichotomic: return dichotomicExtract(pred, sub);
      case Algorithm::Swift: return swiftXplain(pred, sub, config, *pool);
    }
    return within;
  };

  const auto start = std::chrono::steady_clock::now();
  EnumerationResult out;
  out.axps.kind = ExplanationKind::AXp;
  out.cxps.kind = ExplanationKind::CXp;
  bool exhausted = false;
  for (;;) {
    if (options.limit != 0 && out.stream.size() >= options.limit) break;
    auto seed = engine.next();
    if (!seed) {
      exhausted = true;
      break;
    }
    Enumerated found;
    if (waxp(*seed)) {
      found = {ExplanationKind::AXp, shrink(waxp, *seed)};
      engine.blockAxp(found.set);
      out.axps.sets.push_back(found.set);
    } else {
      // F \ seed admits an adversarial example, so it contains a CXp.
      found = {ExplanationKind::CXp, shrink(wcxp, seed->complement())};
      engine.blockCxp(found.set);
      out.cxps.sets.push_back(found.set);
    }
    if (onFound) onFound(found);
    out.stream.push_back(std::move(found));
  }
  out.axps.sets = canonical(std::move(out.axps.sets));
  out.cxps.sets = canonical(std::move(out.cxps.sets));
  out.axps.complete = out.cxps.complete = exhausted;
  out.stats = waxp.stats();
  out.stats += wcxp.stats();
  out.stats.seed = config.seed;
  out.stats.resultSize = out.stream.size();
  out.stats.wallTime = std::chrono::steady_clock::now() - start;
  return out;
}

}  // namespace drxp
