#include "drxp/oracle.hpp"

#include "drxp/errors.hpp"

namespace drxp {

void checkQuery(const OracleQuery& query, std::size_t featureCount) {
  if (query.fixed.universe() != featureCount) {
    throw DimensionMismatch("query fixed-set universe " + std::to_string(query.fixed.universe()) +
                            " differs from feature count " + std::to_string(featureCount));
  }
  if (!(query.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
}

bool verifyWitness(const ExplanationProblem& problem, const Point& witness, const OracleQuery& query) {
  const auto& cp = problem.problem();
  cp.checkPoint(witness);
  checkQuery(query, cp.featureCount());
  const auto& v = problem.instance().point;
  for (FeatureId i : query.fixed.members()) {
    if (witness[i - 1] != v[i - 1]) return false;
  }
  if (!withinBall(distance(witness, v, query.norm, &cp.domains()), query.epsilon)) return false;
  return cp.classifyUnchecked(witness) != problem.instance().label;
}

}  // namespace drxp
