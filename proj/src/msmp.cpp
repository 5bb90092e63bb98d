#include "drxp/msmp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "drxp/errors.hpp"

namespace drxp {

std::string_view kindName(ExplanationKind kind) { return kind == ExplanationKind::AXp ? "axp" : "cxp"; }

void RunStats::absorb(const BatchOutcome& outcome) {
  oracleCalls += outcome.calls;
  cancelledCalls += outcome.cancellations;
  lateResults += outcome.lateResults;
  ++parallelRounds;
}

RunStats& RunStats::operator+=(const RunStats& other) {
  oracleCalls += other.oracleCalls;
  parallelRounds += other.parallelRounds;
  cancelledCalls += other.cancelledCalls;
  lateResults += other.lateResults;
  fdInvocations += other.fdInvocations;
  fdAllNecessary += other.fdAllNecessary;
  fdFreed += other.fdFreed;
  wallTime += other.wallTime;
  return *this;
}

MonotonePredicate::MonotonePredicate(Oracle& oracle, ExplanationKind kind, double epsilon, Norm norm)
    : oracle_(oracle), kind_(kind), epsilon_(epsilon), norm_(norm), universe_(oracle.featureCount()) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
}

OracleQuery MonotonePredicate::queryFor(const FeatureSet& s) const {
  return {kind_ == ExplanationKind::AXp ? s : s.complement(), epsilon_, norm_};
}

bool MonotonePredicate::interpret(const OracleVerdict& verdict) const {
  if (verdict.wasCancelled()) throw OracleFailure("oracle call was cancelled");
  return kind_ == ExplanationKind::AXp ? verdict.robustAnswer() : verdict.advFound();
}

Polarity MonotonePredicate::polarity() const noexcept {
  return kind_ == ExplanationKind::AXp ? Polarity::RobustIsTrue : Polarity::AdvIsTrue;
}

bool MonotonePredicate::operator()(const FeatureSet& s) {
  const auto verdict = oracle_.findAdvEx(queryFor(s));
  ++stats_.oracleCalls;
  ++stats_.parallelRounds;
  return interpret(verdict);
}

std::string_view fdActivationName(FdActivation rule) {
  return rule == FdActivation::PoolFraction ? "pool-fraction" : "pool-fraction-within-batch";
}

FdActivation parseFdActivation(std::string_view text) {
  if (text == "pool-fraction") return FdActivation::PoolFraction;
  if (text == "pool-fraction-within-batch") return FdActivation::PoolFractionWithinBatch;
  throw std::invalid_argument("unknown FD activation rule '" + std::string(text) + "'");
}

void validateRunConfig(const RunConfig& config, std::size_t m) {
  if (config.processors < 1) throw std::invalid_argument("processors must be at least 1");
  if (!(config.fdThreshold >= 0.0 && config.fdThreshold <= 1.0)) {
    throw std::invalid_argument("FD threshold delta must lie in [0, 1]");
  }
  if (!(config.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!config.ordering.empty()) {
    if (config.ordering.size() != m) throw std::invalid_argument("ordering must list every feature once");
    std::vector<FeatureId> sorted = config.ordering;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < m; ++k) {
      if (sorted[k] != k + 1) throw std::invalid_argument("ordering is not a permutation of 1..m");
    }
  }
}

std::vector<FeatureId> resolveOrdering(const RunConfig& config, std::size_t m) {
  validateRunConfig(config, m);
  if (!config.ordering.empty()) return config.ordering;
  std::vector<FeatureId> order(m);
  std::iota(order.begin(), order.end(), FeatureId{1});
  if (config.randomOrdering) {
    std::mt19937_64 rng(config.seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

void requireSatisfied(MonotonePredicate& pred, const FeatureSet& set) {
  if (pred.kind() == ExplanationKind::AXp && set == FeatureSet::full(pred.universe())) return;
  if (!pred(set)) {
    throw NoExplanation(pred.kind() == ExplanationKind::AXp
                            ? "fixing the candidate features does not rule out adversarial examples"
                            : "no adversarial example exists within epsilon: the instance is robust");
  }
}

namespace {

FeatureSet setOf(std::size_t m, std::span<const FeatureId> ids) {
  FeatureSet s(m);
  for (auto i : ids) s.insert(i);
  return s;
}

FeatureSet withPrefix(const FeatureSet& s, std::span<const FeatureId> w, std::size_t j) {
  FeatureSet out = s;
  for (std::size_t k = 0; k < j; ++k) out.insert(w[k]);
  return out;
}

std::size_t ceilDiv(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

}  // namespace

FeatureSet deletionExtract(MonotonePredicate& pred, std::span<const FeatureId> order) {
  FeatureSet s = setOf(pred.universe(), order);
  // Earlier features are preferred in the result, so they are tried last.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const FeatureId i = *it;
    auto reduced = s.without(i);
    if (pred(reduced)) s = std::move(reduced);
  }
  return s;
}

FeatureSet dichotomicExtract(MonotonePredicate& pred, std::span<const FeatureId> order) {
  FeatureSet s(pred.universe());
  std::vector<FeatureId> w(order.begin(), order.end());
  for (;;) {
    if (pred(s)) break;
    // pred(S u W) holds and pred(S) fails: bracket the transition prefix.
    std::size_t lo = 0;
    std::size_t hi = w.size();
    while (hi - lo > 1) {
      const std::size_t mid = lo + ceilDiv(hi - lo, 2);
      if (pred(withPrefix(s, w, mid))) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    s.insert(w[hi - 1]);
    w.resize(hi - 1);
    if (w.empty()) break;
  }
  return s;
}

std::size_t findTransitionPrefix(MonotonePredicate& pred, const FeatureSet& s, std::span<const FeatureId> w,
                                 std::size_t q, WorkerPool& pool) {
  if (q == 0) throw std::invalid_argument("processors must be at least 1");
  const std::size_t n = w.size();
  if (n == 0) return 0;

  // First round: prefix 0 (S alone) plus omega-1 evenly spaced prefixes.
  std::size_t omega = std::min(q, n);
  std::vector<std::size_t> probes{0};
  for (std::size_t r = 1; r < omega; ++r) probes.push_back(ceilDiv(r * n, omega));

  std::size_t lo = 0;  // known false once the first round has run
  std::size_t hi = n;  // known true
  for (;;) {
    probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
    ProbeBatch batch;
    batch.decision = DecisionRule::BoundarySearch;
    batch.polarity = pred.polarity();
    batch.budget = q;
    for (auto j : probes) batch.probes.push_back(pred.queryFor(withPrefix(s, w, j)));
    const auto outcome = runBatch(pred.oracle(), pool, batch);
    pred.stats().absorb(outcome);

    const std::size_t t = *outcome.boundary;
    if (t < probes.size()) hi = probes[t];
    if (t > 0) lo = probes[t - 1];
    if (hi == 0) return 0;
    if (hi == lo + 1) return hi;

    omega = std::min(q, hi - lo - 1);
    probes.clear();
    for (std::size_t r = 1; r <= omega; ++r) {
      const std::size_t j = lo + ceilDiv(r * (hi - lo), omega + 1);
      if (j > lo && j < hi) probes.push_back(j);
    }
  }
}

FdOutcome featDisjunct(MonotonePredicate& pred, const FeatureSet& s, std::span<const FeatureId> w,
                       std::size_t q, WorkerPool& pool, std::mt19937_64& rng) {
  if (w.empty()) throw std::invalid_argument("feature disjunction needs a nonempty pool");
  const std::size_t t = std::min(q, w.size());
  FdOutcome out;
  out.tested.assign(w.end() - static_cast<std::ptrdiff_t>(t), w.end());

  FeatureSet base = s;
  for (auto i : w) base.insert(i);

  ProbeBatch batch;
  batch.decision = DecisionRule::AllFalseCheck;
  batch.polarity = pred.polarity();
  batch.budget = q;
  for (auto i : out.tested) batch.probes.push_back(pred.queryFor(base.without(i)));
  // A uniformly random priority; the first irrelevant feature in it is freed.
  batch.priority.resize(t);
  std::iota(batch.priority.begin(), batch.priority.end(), std::size_t{0});
  std::shuffle(batch.priority.begin(), batch.priority.end(), rng);

  const auto outcome = runBatch(pred.oracle(), pool, batch);
  pred.stats().absorb(outcome);
  if (outcome.firstTrue) out.freed = out.tested[*outcome.firstTrue];
  return out;
}

namespace {

bool fdActive(const RunConfig& config, std::size_t pool, std::size_t m) {
  if (!config.fdEnabled) return false;
  const bool fraction = static_cast<double>(pool) <= (1.0 - config.fdThreshold) * static_cast<double>(m);
  if (config.fdActivation == FdActivation::PoolFraction) return fraction;
  return fraction && pool <= config.processors;
}

}  // namespace

FeatureSet swiftXplain(MonotonePredicate& pred, std::span<const FeatureId> order, const RunConfig& config,
                       WorkerPool& pool) {
  const std::size_t q = config.processors;
  if (q == 0) throw std::invalid_argument("processors must be at least 1");
  std::mt19937_64 rng(config.seed);
  pred.stats().seed = config.seed;

  FeatureSet s(pred.universe());
  std::vector<FeatureId> w(order.begin(), order.end());
  bool fdMode = false;
  while (!w.empty()) {
    if (fdMode || fdActive(config, w.size(), order.size())) {
      fdMode = true;
      const auto fd = featDisjunct(pred, s, w, q, pool, rng);
      ++pred.stats().fdInvocations;
      if (fd.allNecessary()) {
        ++pred.stats().fdAllNecessary;
        for (auto i : fd.tested) s.insert(i);
        w.resize(w.size() - fd.tested.size());
      } else {
        ++pred.stats().fdFreed;
        w.erase(std::find(w.begin(), w.end(), *fd.freed));
      }
      continue;
    }
    const std::size_t j = findTransitionPrefix(pred, s, w, q, pool);
    if (j == 0) break;
    s.insert(w[j - 1]);
    w.resize(j - 1);
  }
  return s;
}

FeatureSet swiftXplain(MonotonePredicate& pred, std::span<const FeatureId> order, const RunConfig& config) {
  WorkerPool pool(config.processors);
  return swiftXplain(pred, order, config, pool);
}

bool verifyMinimal(MonotonePredicate& pred, const FeatureSet& s) {
  bool ok = pred(s);
  for (FeatureId i : s.members()) {
    if (pred(s.without(i))) ok = false;
  }
  return ok;
}

std::string_view algorithmName(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Deletion: return "deletion";
    case Algorithm::Dichotomic: return "dichotomic";
    case Algorithm::Swift: return "swift";
  }
  return "?";
}

Algorithm parseAlgorithm(std::string_view text) {
  if (text == "deletion" || text == "del") return Algorithm::Deletion;
  if (text == "dichotomic" || text == "dicho") return Algorithm::Dichotomic;
  if (text == "swift") return Algorithm::Swift;
  throw std::invalid_argument("unknown algorithm '" + std::string(text) + "'");
}

Extraction extractExplanation(Oracle& oracle, const RunConfig& config, Algorithm algorithm) {
  const std::size_t m = oracle.featureCount();
  const auto order = resolveOrdering(config, m);
  MonotonePredicate pred(oracle, config.kind, config.epsilon, config.norm);
  const auto start = std::chrono::steady_clock::now();

  requireSatisfied(pred, FeatureSet::full(m));
  FeatureSet result(m);
  switch (algorithm) {
    case Algorithm::Deletion: result = deletionExtract(pred, order); break;
    case Algorithm::Dichotomic: result = dichotomicExtract(pred, order); break;
    case Algorithm::Swift: result = swiftXplain(pred, order, config); break;
  }
  Extraction out{std::move(result), pred.stats()};
  out.stats.seed = config.seed;
  out.stats.resultSize = out.set.size();
  out.stats.wallTime = std::chrono::steady_clock::now() - start;
  return out;
}

}  // namespace drxp
