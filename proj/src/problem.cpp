#include "drxp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "drxp/errors.hpp"

namespace drxp {

FeatureDomain FeatureDomain::categorical(std::vector<std::string> labels) {
  if (labels.empty()) throw DomainViolation("categorical domain must be nonempty");
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size()) throw DomainViolation("categorical labels must be distinct");
  return FeatureDomain(Categorical{std::move(labels)});
}

FeatureDomain FeatureDomain::discrete(std::vector<double> values) {
  if (values.empty()) throw DomainViolation("discrete domain must be nonempty");
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (!(values[k - 1] < values[k])) {
      throw DomainViolation("discrete domain values must be strictly increasing");
    }
  }
  return FeatureDomain(DiscreteOrdinal{std::move(values)});
}

FeatureDomain FeatureDomain::continuous(double lo, double hi, std::optional<double> gridStep) {
  if (!(lo < hi)) throw DomainViolation("continuous domain requires lo < hi");
  if (gridStep && !(*gridStep > 0.0)) throw DomainViolation("grid step must be positive");
  return FeatureDomain(ContinuousOrdinal{lo, hi, gridStep});
}

bool FeatureDomain::contains(double value) const {
  return std::visit(
      [value](const auto& d) -> bool {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Categorical>) {
          return value >= 0 && value == std::floor(value) &&
                 value < static_cast<double>(d.labels.size());
        } else if constexpr (std::is_same_v<T, DiscreteOrdinal>) {
          return std::binary_search(d.values.begin(), d.values.end(), value);
        } else {
          return value >= d.lo && value <= d.hi;
        }
      },
      kind_);
}

std::optional<std::vector<double>> FeatureDomain::enumerable() const {
  return std::visit(
      [](const auto& d) -> std::optional<std::vector<double>> {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Categorical>) {
          std::vector<double> out(d.labels.size());
          for (std::size_t k = 0; k < out.size(); ++k) out[k] = static_cast<double>(k);
          return out;
        } else if constexpr (std::is_same_v<T, DiscreteOrdinal>) {
          return d.values;
        } else {
          if (!d.gridStep) return std::nullopt;
          std::vector<double> out;
          const double step = *d.gridStep;
          for (std::size_t k = 0;; ++k) {
            const double x = d.lo + static_cast<double>(k) * step;
            if (x > d.hi + kDistanceTolerance) break;
            out.push_back(std::min(x, d.hi));
          }
          return out;
        }
      },
      kind_);
}

Norm parseNorm(std::string_view text) {
  if (text == "l0" || text == "0") return Norm::L0;
  if (text == "l1" || text == "1") return Norm::L1;
  if (text == "l2" || text == "2") return Norm::L2;
  if (text == "linf" || text == "inf") return Norm::Linf;
  throw std::invalid_argument("unknown norm '" + std::string(text) + "' (expected l0, l1, l2, linf)");
}

std::string_view normName(Norm norm) {
  switch (norm) {
    case Norm::L0: return "l0";
    case Norm::L1: return "l1";
    case Norm::L2: return "l2";
    case Norm::Linf: return "linf";
  }
  return "?";
}

ClassificationProblem::ClassificationProblem(std::vector<FeatureDomain> domains,
                                             std::vector<std::string> classes,
                                             Classifier classifier,
                                             std::vector<std::string> featureNames)
    : domains_(std::move(domains)),
      classes_(std::move(classes)),
      classifier_(std::move(classifier)),
      names_(std::move(featureNames)) {
  if (domains_.empty()) throw DomainViolation("a classification problem needs at least one feature");
  if (classes_.size() < 2) throw DomainViolation("a classification problem needs at least two classes");
  std::set<std::string> seen(classes_.begin(), classes_.end());
  if (seen.size() != classes_.size()) throw DomainViolation("class labels must be distinct");
  if (names_.empty()) {
    for (std::size_t i = 1; i <= domains_.size(); ++i) names_.push_back("x" + std::to_string(i));
  } else if (names_.size() != domains_.size()) {
    throw DimensionMismatch("feature name count differs from domain count");
  }

  const auto m = domains_.size();
  const auto k = classes_.size();
  auto checkClass = [k](ClassId c) {
    if (c >= k) throw DomainViolation("classifier label " + std::to_string(c) + " not a class");
  };
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, LookupTable>) {
          checkClass(c.defaultClass);
          for (const auto& [pt, label] : c.entries) {
            checkPoint(pt);
            checkClass(label);
          }
        } else if constexpr (std::is_same_v<T, LinearThreshold>) {
          if (c.weights.size() != m) throw DimensionMismatch("linear weights size differs from m");
          checkClass(c.posClass);
          checkClass(c.negClass);
        } else if constexpr (std::is_same_v<T, RegionConjunction>) {
          for (const auto& lc : c.constraints) {
            if (lc.coeffs.size() != m) throw DimensionMismatch("constraint size differs from m");
          }
          checkClass(c.insideClass);
          checkClass(c.outsideClass);
        } else {
          validateTree(c, m);
          for (const auto& node : c.nodes) {
            if (node.leaf) {
              checkClass(node.label);
            } else if (node.categorical != domains_[node.feature - 1].isCategorical()) {
              throw DomainViolation("tree split kind does not match domain of feature " +
                                    std::to_string(node.feature));
            }
          }
        }
      },
      classifier_);
}

std::optional<ClassId> ClassificationProblem::classIndex(std::string_view label) const {
  auto it = std::find(classes_.begin(), classes_.end(), label);
  if (it == classes_.end()) return std::nullopt;
  return static_cast<ClassId>(it - classes_.begin());
}

void ClassificationProblem::checkPoint(const Point& x) const {
  if (x.size() != domains_.size()) {
    throw DimensionMismatch("point has " + std::to_string(x.size()) + " coordinates, expected " +
                            std::to_string(domains_.size()));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!domains_[i].contains(x[i])) {
      std::ostringstream os;
      os << "value " << x[i] << " outside the domain of feature " << (i + 1);
      throw DomainViolation(os.str());
    }
  }
}

ClassId ClassificationProblem::classify(const Point& x) const {
  checkPoint(x);
  return evaluate(classifier_, x);
}

ExplanationProblem validateExplanationProblem(ClassificationProblem problem, Instance instance) {
  problem.checkPoint(instance.point);
  if (instance.label >= problem.classes().size()) throw DomainViolation("instance label is not a class");
  const ClassId predicted = problem.classify(instance.point);
  if (predicted != instance.label) {
    throw PredictionMismatch(problem.classes()[predicted],
                             "classifier predicts " + problem.classes()[predicted] + ", instance says " +
                                 problem.classes()[instance.label]);
  }
  return ExplanationProblem(std::move(problem), std::move(instance));
}

double distance(const Point& x, const Point& v, Norm norm, const std::vector<FeatureDomain>* domains) {
  if (x.size() != v.size()) throw DimensionMismatch("distance between points of different length");
  if (domains && norm != Norm::L0) {
    for (const auto& d : *domains) {
      if (d.isCategorical()) throw Unsupported("categorical features admit only the l0 norm");
    }
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double diff = std::abs(x[i] - v[i]);
    switch (norm) {
      case Norm::L0: acc += (x[i] != v[i]) ? 1.0 : 0.0; break;
      case Norm::L1: acc += diff; break;
      case Norm::L2: acc += diff * diff; break;
      case Norm::Linf: acc = std::max(acc, diff); break;
    }
  }
  return norm == Norm::L2 ? std::sqrt(acc) : acc;
}

bool withinBall(double dist, double epsilon) { return dist <= epsilon + kDistanceTolerance; }

}  // namespace drxp
