#include "drxp/models.hpp"

#include <algorithm>
#include <numeric>

#include "drxp/errors.hpp"

namespace drxp {

bool LinearConstraint::holds(const Point& x) const {
  const double lhs = std::inner_product(coeffs.begin(), coeffs.end(), x.begin(), 0.0);
  switch (rel) {
    case Relation::Less: return lhs < rhs;
    case Relation::LessEqual: return lhs <= rhs;
    case Relation::GreaterEqual: return lhs >= rhs;
    case Relation::Greater: return lhs > rhs;
  }
  return false;
}

namespace {

ClassId evalTree(const DecisionTree& tree, const Point& x) {
  std::size_t at = 0;
  for (;;) {
    const TreeNode& n = tree.nodes[at];
    if (n.leaf) return n.label;
    const double value = x[n.feature - 1];
    bool left;
    if (n.categorical) {
      left = std::find(n.categories.begin(), n.categories.end(), static_cast<std::size_t>(value)) !=
             n.categories.end();
    } else {
      left = value <= n.threshold;
    }
    at = left ? n.left : n.right;
  }
}

}  // namespace

ClassId evaluate(const Classifier& classifier, const Point& x) {
  return std::visit(
      [&x](const auto& c) -> ClassId {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, LookupTable>) {
          auto it = c.entries.find(x);
          return it == c.entries.end() ? c.defaultClass : it->second;
        } else if constexpr (std::is_same_v<T, LinearThreshold>) {
          const double s = std::inner_product(c.weights.begin(), c.weights.end(), x.begin(), c.bias);
          return s >= 0.0 ? c.posClass : c.negClass;
        } else if constexpr (std::is_same_v<T, RegionConjunction>) {
          const bool inside = std::all_of(c.constraints.begin(), c.constraints.end(),
                                          [&x](const LinearConstraint& lc) { return lc.holds(x); });
          return inside ? c.insideClass : c.outsideClass;
        } else {
          return evalTree(c, x);
        }
      },
      classifier);
}

void validateTree(const DecisionTree& tree, std::size_t featureCount) {
  if (tree.nodes.empty()) throw SchemaError("decision tree has no nodes");
  // Every node reachable exactly once from the root: a rooted tree.
  std::vector<int> seen(tree.nodes.size(), 0);
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const auto at = stack.back();
    stack.pop_back();
    if (at >= tree.nodes.size()) throw SchemaError("decision tree child index out of range");
    if (seen[at]++) throw SchemaError("decision tree node " + std::to_string(at) + " reached twice");
    const auto& n = tree.nodes[at];
    if (n.leaf) continue;
    if (n.feature < 1 || n.feature > featureCount) {
      throw SchemaError("decision tree splits on unknown feature " + std::to_string(n.feature));
    }
    stack.push_back(n.left);
    stack.push_back(n.right);
  }
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (!seen[k]) throw SchemaError("decision tree node " + std::to_string(k) + " unreachable");
  }
}

const char* kindName(const Classifier& classifier) {
  static constexpr const char* names[] = {"lookup", "linear", "region", "tree"};
  return names[classifier.index()];
}

}  // namespace drxp
