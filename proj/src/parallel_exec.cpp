#include "drxp/parallel_exec.hpp"

#include <exception>
#include <memory>
#include <numeric>

#include "drxp/errors.hpp"

namespace drxp {

WorkerPool::WorkerPool(std::size_t threads) {
  if (threads == 0) throw std::invalid_argument("worker pool needs at least one thread");
  workers_.reserve(threads);
  for (std::size_t k = 0; k < threads; ++k) {
    workers_.emplace_back([this](std::stop_token stop) { loop(stop); });
  }
}

WorkerPool::~WorkerPool() {
  for (auto& w : workers_) w.request_stop();
  cv_.notify_all();
  workers_.clear();
}

void WorkerPool::submit(std::function<void()> task) {
  {
    std::lock_guard lock(mutex_);
    tasks_.push_back(std::move(task));
  }
  cv_.notify_one();
}

void WorkerPool::loop(std::stop_token stop) {
  for (;;) {
    std::function<void()> task;
    {
      std::unique_lock lock(mutex_);
      if (!cv_.wait(lock, stop, [this] { return !tasks_.empty(); })) return;
      task = std::move(tasks_.front());
      tasks_.pop_front();
    }
    task();
  }
}

namespace {

enum class ProbeState { Queued, Running, Done, Cancelled };

struct BatchState {
  std::mutex mutex;
  std::condition_variable cv;
  std::vector<ProbeState> state;
  std::vector<OracleVerdict> results;
  std::vector<std::optional<bool>> value;
  std::vector<std::stop_source> stops;
  std::size_t inflight = 0;
  bool decided = false;
  std::size_t late = 0;
  std::size_t failedLate = 0;
  std::exception_ptr error;
};

bool truthOf(const OracleVerdict& v, Polarity polarity) {
  return polarity == Polarity::RobustIsTrue ? v.robustAnswer() : v.advFound();
}

/// Boundary decision over the completed probes; throws on a non-step pattern.
std::optional<std::size_t> boundaryDecision(const std::vector<std::optional<bool>>& value) {
  const auto n = value.size();
  std::optional<std::size_t> lowestTrue;
  for (std::size_t i = 0; i < n; ++i) {
    if (value[i] == true) {
      lowestTrue = i;
      break;
    }
  }
  if (lowestTrue) {
    for (std::size_t j = *lowestTrue + 1; j < n; ++j) {
      if (value[j] == false) {
        throw OracleInconsistency("probe " + std::to_string(*lowestTrue) + " holds but larger probe " +
                                  std::to_string(j) + " does not: predicate is not monotone");
      }
    }
    if (*lowestTrue == 0 || value[*lowestTrue - 1] == false) return lowestTrue;
  }
  if (value[n - 1] == false) return n;
  return std::nullopt;
}

}  // namespace

BatchOutcome runBatch(Oracle& oracle, WorkerPool& pool, const ProbeBatch& batch) {
  const auto n = batch.probes.size();
  if (n == 0) throw std::invalid_argument("probe batch must contain at least one probe");
  if (batch.budget == 0) throw std::invalid_argument("probe batch budget must be at least 1");

  std::vector<std::size_t> order = batch.priority;
  if (order.empty()) {
    order.resize(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
  } else if (order.size() != n) {
    throw std::invalid_argument("probe priority must list every probe once");
  }
  const auto budget = std::min(batch.budget, n);
  const auto start = std::chrono::steady_clock::now();

  auto st = std::make_shared<BatchState>();
  st->state.assign(n, ProbeState::Queued);
  st->results.assign(n, OracleVerdict::cancelled());
  st->value.assign(n, std::nullopt);
  st->stops.resize(n);

  BatchOutcome out;
  std::size_t next = 0;
  std::unique_lock lock(st->mutex);

  auto decide = [&]() -> bool {
    if (batch.decision == DecisionRule::BoundarySearch) {
      if (auto t = boundaryDecision(st->value)) {
        out.boundary = t;
        return true;
      }
      return false;
    }
    for (auto idx : order) {
      if (!st->value[idx]) return false;
      if (*st->value[idx]) {
        out.firstTrue = idx;
        return true;
      }
    }
    out.allFalse = true;
    return true;
  };

  auto cancelRest = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      if (st->state[i] == ProbeState::Running) st->stops[i].request_stop();
      if (st->state[i] == ProbeState::Queued) st->state[i] = ProbeState::Cancelled;
    }
  };

  for (;;) {
    if (!st->decided && !st->error) {
      try {
        st->decided = decide();
      } catch (...) {
        st->error = std::current_exception();
      }
    }
    if (st->decided || st->error) cancelRest();
    while (!st->decided && !st->error && st->inflight < budget && next < n) {
      const auto idx = order[next++];
      st->state[idx] = ProbeState::Running;
      ++st->inflight;
      pool.submit([st, idx, &oracle, &batch] {
        OracleVerdict verdict;
        std::exception_ptr err;
        try {
          verdict = oracle.findAdvEx(batch.probes[idx], st->stops[idx].get_token());
        } catch (...) {
          err = std::current_exception();
        }
        std::lock_guard g(st->mutex);
        --st->inflight;
        const bool stopped = st->stops[idx].stop_requested();
        if (err) {
          if (st->decided) {
            ++st->failedLate;
            st->state[idx] = ProbeState::Done;
          } else {
            st->state[idx] = ProbeState::Cancelled;
            if (!st->error) st->error = err;
          }
        } else if (verdict.wasCancelled()) {
          st->state[idx] = ProbeState::Cancelled;
          if (!stopped && !st->decided && !st->error) {
            st->error = std::make_exception_ptr(OracleFailure("oracle cancelled a probe unprompted"));
          }
        } else {
          st->state[idx] = ProbeState::Done;
          if (st->decided) ++st->late;
          st->results[idx] = std::move(verdict);
          // Late results are recorded but never change the decided value.
          if (!st->decided) st->value[idx] = truthOf(st->results[idx], batch.polarity);
        }
        st->cv.notify_all();
      });
    }
    if ((st->decided || st->error) && st->inflight == 0) break;
    if (!st->decided && !st->error && st->inflight == 0 && next == n) {
      // Every probe completed yet no decision: only possible after an error.
      st->error = std::make_exception_ptr(OracleFailure("probe batch ended without a decision"));
      continue;
    }
    st->cv.wait(lock);
  }

  if (st->error && !st->decided) std::rethrow_exception(st->error);

  out.results = st->results;
  for (std::size_t i = 0; i < n; ++i) {
    if (st->state[i] == ProbeState::Done) {
      ++out.calls;
    } else {
      ++out.cancellations;
    }
  }
  out.lateResults = st->late + st->failedLate;
  out.wallTime = std::chrono::steady_clock::now() - start;
  return out;
}

}  // namespace drxp
