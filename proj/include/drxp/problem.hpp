#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "drxp/feature_set.hpp"
#include "drxp/models.hpp"

namespace drxp {

struct Categorical {
  std::vector<std::string> labels;
};

struct DiscreteOrdinal {
  std::vector<double> values;  // strictly increasing
};

/// Real interval [lo, hi], optionally with a discretization step used by the
/// grid oracle.
struct ContinuousOrdinal {
  double lo = 0.0;
  double hi = 1.0;
  std::optional<double> gridStep;
};

class FeatureDomain {
 public:
  using Variant = std::variant<Categorical, DiscreteOrdinal, ContinuousOrdinal>;

  static FeatureDomain categorical(std::vector<std::string> labels);
  static FeatureDomain discrete(std::vector<double> values);
  static FeatureDomain continuous(double lo, double hi, std::optional<double> gridStep = {});

  const Variant& kind() const noexcept { return kind_; }
  bool isCategorical() const noexcept { return std::holds_alternative<Categorical>(kind_); }
  bool isContinuous() const noexcept { return std::holds_alternative<ContinuousOrdinal>(kind_); }

  bool contains(double value) const;

  /// Finite list of values a free feature may take, or nullopt for a
  /// continuous domain without a grid.
  std::optional<std::vector<double>> enumerable() const;

 private:
  explicit FeatureDomain(Variant kind) : kind_(std::move(kind)) {}
  Variant kind_;
};

enum class Norm { L0, L1, L2, Linf };

Norm parseNorm(std::string_view text);  // l0 | l1 | l2 | linf
std::string_view normName(Norm norm);

/// Absolute tolerance applied to "distance <= epsilon" tests.
inline constexpr double kDistanceTolerance = 1e-9;

class ClassificationProblem {
 public:
  ClassificationProblem(std::vector<FeatureDomain> domains, std::vector<std::string> classes,
                        Classifier classifier, std::vector<std::string> featureNames = {});

  std::size_t featureCount() const noexcept { return domains_.size(); }
  const std::vector<FeatureDomain>& domains() const noexcept { return domains_; }
  const FeatureDomain& domain(FeatureId i) const { return domains_.at(i - 1); }
  const std::vector<std::string>& classes() const noexcept { return classes_; }
  const Classifier& classifier() const noexcept { return classifier_; }
  const std::vector<std::string>& featureNames() const noexcept { return names_; }

  std::optional<ClassId> classIndex(std::string_view label) const;

  /// Throws DimensionMismatch or DomainViolation.
  void checkPoint(const Point& x) const;
  ClassId classify(const Point& x) const;
  /// Classification without domain checks, for hot enumeration loops over
  /// points already known to be in the domains.
  ClassId classifyUnchecked(const Point& x) const { return evaluate(classifier_, x); }

 private:
  std::vector<FeatureDomain> domains_;
  std::vector<std::string> classes_;
  Classifier classifier_;
  std::vector<std::string> names_;
};

struct Instance {
  Point point;
  ClassId label = 0;
};

/// A classification problem paired with an instance it predicts correctly.
class ExplanationProblem {
 public:
  const ClassificationProblem& problem() const noexcept { return problem_; }
  const Instance& instance() const noexcept { return instance_; }
  std::size_t featureCount() const noexcept { return problem_.featureCount(); }

 private:
  friend ExplanationProblem validateExplanationProblem(ClassificationProblem, Instance);
  ExplanationProblem(ClassificationProblem p, Instance i)
      : problem_(std::move(p)), instance_(std::move(i)) {}

  ClassificationProblem problem_;
  Instance instance_;
};

/// Throws DomainViolation, or PredictionMismatch carrying the predicted class.
ExplanationProblem validateExplanationProblem(ClassificationProblem problem, Instance instance);

/// l_p distance; categorical coordinates are admitted only under l0.
double distance(const Point& x, const Point& v, Norm norm,
                const std::vector<FeatureDomain>* domains = nullptr);

bool withinBall(double dist, double epsilon);

}  // namespace drxp
