#include "drxp/grid_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "drxp/errors.hpp"

namespace drxp {

GridOracle::GridOracle(ExplanationProblem problem, std::uint64_t candidateCap)
    : problem_(std::move(problem)), cap_(candidateCap) {
  const auto& cp = problem_.problem();
  const auto& v = problem_.instance().point;
  values_.resize(cp.featureCount());
  for (std::size_t i = 0; i < cp.featureCount(); ++i) {
    auto vals = cp.domains()[i].enumerable();
    if (!vals) continue;
    if (!std::binary_search(vals->begin(), vals->end(), v[i])) {
      vals->insert(std::upper_bound(vals->begin(), vals->end(), v[i]), v[i]);
    }
    values_[i] = std::move(*vals);
  }
}

namespace {

/// Depth-first walk over the constrained ball. `visit` returns true to stop.
/// Returns false if interrupted by the stop token.
bool walkBall(const ExplanationProblem& problem, const std::vector<std::vector<double>>& values,
              const OracleQuery& query, std::uint64_t cap, const std::stop_token& stop,
              const std::function<bool(const Point&)>& visit) {
  const auto& cp = problem.problem();
  const auto m = cp.featureCount();
  const auto& v = problem.instance().point;
  checkQuery(query, m);

  for (std::size_t i = 0; i < m; ++i) {
    if (query.fixed.contains(i + 1)) continue;
    if (values[i].empty()) {
      throw Unsupported("feature " + std::to_string(i + 1) +
                        " is continuous without a discretization grid and cannot be left free");
    }
    if (query.norm != Norm::L0 && cp.domains()[i].isCategorical()) {
      throw Unsupported("categorical features admit only the l0 norm");
    }
  }

  const double bound = query.epsilon + kDistanceTolerance;
  Point x = v;
  std::uint64_t leaves = 0;
  bool interrupted = false;

  // Contribution of one coordinate to the accumulated norm.
  auto contribution = [&](std::size_t i, double value) {
    const double d = std::abs(value - v[i]);
    switch (query.norm) {
      case Norm::L0: return value != v[i] ? 1.0 : 0.0;
      case Norm::L1: return d;
      case Norm::L2: return d * d;
      case Norm::Linf: return d;
    }
    return 0.0;
  };
  auto combine = [&](double acc, double c) { return query.norm == Norm::Linf ? std::max(acc, c) : acc + c; };
  auto inBall = [&](double acc) { return (query.norm == Norm::L2 ? std::sqrt(acc) : acc) <= bound; };

  std::function<bool(std::size_t, double)> dfs = [&](std::size_t i, double acc) -> bool {
    if (i == m) {
      if (++leaves > cap) {
        throw CombinatorialLimit("grid oracle exceeded " + std::to_string(cap) + " candidate points");
      }
      if (leaves % GridOracle::kStopCheckInterval == 0 && stop.stop_requested()) {
        interrupted = true;
        return true;
      }
      return visit(x);
    }
    if (query.fixed.contains(i + 1)) {
      x[i] = v[i];
      return dfs(i + 1, acc);
    }
    for (double value : values[i]) {
      const double next = combine(acc, contribution(i, value));
      if (!inBall(next)) continue;
      x[i] = value;
      if (dfs(i + 1, next)) return true;
    }
    x[i] = v[i];
    return false;
  };
  dfs(0, 0.0);
  return !interrupted;
}

}  // namespace

OracleVerdict GridOracle::findAdvEx(const OracleQuery& query, std::stop_token stop) {
  if (stop.stop_requested()) return OracleVerdict::cancelled();
  const auto& cp = problem_.problem();
  const ClassId c = problem_.instance().label;
  std::optional<Point> found;
  const bool finished = walkBall(problem_, values_, query, cap_, stop, [&](const Point& x) {
    if (cp.classifyUnchecked(x) != c) {
      found = x;
      return true;
    }
    return false;
  });
  if (!finished) return OracleVerdict::cancelled();
  return found ? OracleVerdict::adv(std::move(*found)) : OracleVerdict::robust();
}

std::vector<Point> GridOracle::allWitnesses(const OracleQuery& query) {
  const auto& cp = problem_.problem();
  const ClassId c = problem_.instance().label;
  std::vector<Point> out;
  walkBall(problem_, values_, query, cap_, {}, [&](const Point& x) {
    if (cp.classifyUnchecked(x) != c) out.push_back(x);
    return false;
  });
  return out;
}

}  // namespace drxp
