#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "drxp/oracle.hpp"

namespace drxp {

/// Fixed-size pool of worker threads draining a FIFO task queue.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t threads);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  void submit(std::function<void()> task);
  std::size_t size() const noexcept { return workers_.size(); }

 private:
  void loop(std::stop_token stop);

  std::mutex mutex_;
  std::condition_variable_any cv_;
  std::deque<std::function<void()>> tasks_;
  std::vector<std::jthread> workers_;
};

enum class DecisionRule {
  /// Probes are nested prefixes; the predicate vector must be a monotone step
  /// false...false true...true. Decides the index of the first true probe.
  BoundarySearch,
  /// Decides whether every probe is false; otherwise names the first true
  /// probe in `priority` order.
  AllFalseCheck,
};

/// How an oracle verdict maps to the monotone predicate being searched.
enum class Polarity {
  RobustIsTrue,  // abductive mode: fixed set admits no AEx
  AdvIsTrue,     // contrastive mode: freed set admits an AEx
};

struct ProbeBatch {
  std::vector<OracleQuery> probes;
  DecisionRule decision = DecisionRule::BoundarySearch;
  Polarity polarity = Polarity::RobustIsTrue;
  std::size_t budget = 1;               // max probes in flight
  std::vector<std::size_t> priority;    // AllFalseCheck dispatch order; identity if empty
};

struct BatchOutcome {
  /// Per probe: the verdict, or Cancelled (also for probes never started).
  std::vector<OracleVerdict> results;

  /// BoundarySearch: index of the first true probe, probes.size() if none.
  /// AllFalseCheck: first true probe in priority order, or nullopt.
  std::optional<std::size_t> boundary;
  std::optional<std::size_t> firstTrue;
  bool allFalse = false;

  std::size_t calls = 0;          // probes that ran to a verdict, late ones included
  std::size_t cancellations = 0;  // probes cancelled before or during execution
  std::size_t lateResults = 0;    // verdicts that arrived after the decision
  std::chrono::nanoseconds wallTime{0};
};

/// Runs the batch on the pool with at most `budget` probes in flight. As soon
/// as the decision follows from completed probes, the rest are cancelled.
/// Waits for every started probe before returning. Throws OracleFailure if a
/// probe fails before the decision, OracleInconsistency on a non-monotone
/// BoundarySearch pattern.
BatchOutcome runBatch(Oracle& oracle, WorkerPool& pool, const ProbeBatch& batch);

}  // namespace drxp
