#pragma once

#include <cstddef>
#include <map>
#include <variant>
#include <vector>

namespace drxp {

/// Feature-space point. Ordinal coordinates hold the feature value;
/// categorical coordinates hold the index of the category.
using Point = std::vector<double>;

/// Index into ClassificationProblem::classes.
using ClassId = std::size_t;

/// Finite exceptions over a discrete space plus a default class.
struct LookupTable {
  std::map<Point, ClassId> entries;
  ClassId defaultClass = 0;
};

/// posClass iff w.x + b >= 0.
struct LinearThreshold {
  std::vector<double> weights;
  double bias = 0.0;
  ClassId posClass = 1;
  ClassId negClass = 0;
};

enum class Relation { Less, LessEqual, GreaterEqual, Greater };

/// coeffs . x  (rel)  rhs
struct LinearConstraint {
  std::vector<double> coeffs;
  Relation rel = Relation::LessEqual;
  double rhs = 0.0;

  bool holds(const Point& x) const;
};

/// insideClass iff every constraint holds.
struct RegionConjunction {
  std::vector<LinearConstraint> constraints;
  ClassId insideClass = 1;
  ClassId outsideClass = 0;
};

/// Node of a decision tree stored in a flat array; node 0 is the root.
/// Ordinal splits send x <= threshold left; categorical splits send members
/// of `categories` left.
struct TreeNode {
  bool leaf = false;
  ClassId label = 0;
  std::size_t feature = 0;  // 1-based
  double threshold = 0.0;
  std::vector<std::size_t> categories;
  bool categorical = false;
  std::size_t left = 0;
  std::size_t right = 0;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;
};

using Classifier = std::variant<LookupTable, LinearThreshold, RegionConjunction, DecisionTree>;

/// Raw evaluation; domain membership is checked by ClassificationProblem.
ClassId evaluate(const Classifier& classifier, const Point& x);

/// Throws SchemaError unless the tree is rooted, acyclic and every path ends
/// in a leaf.
void validateTree(const DecisionTree& tree, std::size_t featureCount);

const char* kindName(const Classifier& classifier);

}  // namespace drxp
