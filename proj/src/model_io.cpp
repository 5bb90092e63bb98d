#include "drxp/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "drxp/errors.hpp"

namespace drxp {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw SchemaError(path + ": " + msg);
}

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

const json& array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

std::string labelText(const json& j, const std::string& path) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  fail(path, "expected a class label (string or integer)");
}

ClassId classRef(const json& j, const std::vector<std::string>& classes, const std::string& path) {
  const auto text = labelText(j, path);
  for (std::size_t k = 0; k < classes.size(); ++k) {
    if (classes[k] == text) return k;
  }
  fail(path, "unknown class '" + text + "'");
}

FeatureDomain parseDomain(const json& j, const std::string& path) {
  const auto kind = field(j, "kind", path);
  if (!kind.is_string()) fail(path + ".kind", "expected a string");
  const auto k = kind.get<std::string>();
  try {
    if (k == "categorical") {
      std::vector<std::string> labels;
      const auto& vals = array(field(j, "values", path), path + ".values");
      for (std::size_t n = 0; n < vals.size(); ++n) {
        if (!vals[n].is_string()) fail(path + ".values[" + std::to_string(n) + "]", "expected a string");
        labels.push_back(vals[n].get<std::string>());
      }
      return FeatureDomain::categorical(std::move(labels));
    }
    if (k == "discrete") {
      std::vector<double> values;
      const auto& vals = array(field(j, "values", path), path + ".values");
      for (std::size_t n = 0; n < vals.size(); ++n) {
        values.push_back(number(vals[n], path + ".values[" + std::to_string(n) + "]"));
      }
      return FeatureDomain::discrete(std::move(values));
    }
    if (k == "continuous") {
      std::optional<double> step;
      if (j.contains("grid")) step = number(j["grid"], path + ".grid");
      return FeatureDomain::continuous(number(field(j, "lo", path), path + ".lo"),
                                       number(field(j, "hi", path), path + ".hi"), step);
    }
  } catch (const DomainViolation& e) {
    fail(path, e.what());
  }
  fail(path + ".kind", "unknown domain kind '" + k + "'");
}

Relation parseRelation(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a relation string");
  const auto r = j.get<std::string>();
  if (r == "<") return Relation::Less;
  if (r == "<=") return Relation::LessEqual;
  if (r == ">=") return Relation::GreaterEqual;
  if (r == ">") return Relation::Greater;
  fail(path, "unknown relation '" + r + "'");
}

const char* relationText(Relation r) {
  switch (r) {
    case Relation::Less: return "<";
    case Relation::LessEqual: return "<=";
    case Relation::GreaterEqual: return ">=";
    case Relation::Greater: return ">";
  }
  return "?";
}

std::vector<double> numbers(const json& j, const std::string& path) {
  std::vector<double> out;
  const auto& arr = array(j, path);
  for (std::size_t n = 0; n < arr.size(); ++n) out.push_back(number(arr[n], path + "[" + std::to_string(n) + "]"));
  return out;
}

Point pointFromDomains(const json& j, const std::vector<FeatureDomain>& domains, const std::string& path) {
  const auto& arr = array(j, path);
  if (arr.size() != domains.size()) {
    fail(path, "expected " + std::to_string(domains.size()) + " coordinates, got " + std::to_string(arr.size()));
  }
  Point x(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto p = path + "[" + std::to_string(i) + "]";
    if (const auto* cat = std::get_if<Categorical>(&domains[i].kind())) {
      if (!arr[i].is_string()) fail(p, "expected a category label");
      const auto label = arr[i].get<std::string>();
      auto it = std::find(cat->labels.begin(), cat->labels.end(), label);
      if (it == cat->labels.end()) fail(p, "unknown category '" + label + "'");
      x[i] = static_cast<double>(it - cat->labels.begin());
    } else {
      x[i] = number(arr[i], p);
      if (!domains[i].contains(x[i])) fail(p, "value outside the feature domain");
    }
  }
  return x;
}

json pointToJsonDomains(const Point& x, const std::vector<FeatureDomain>& domains) {
  json out = json::array();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (const auto* cat = std::get_if<Categorical>(&domains[i].kind())) {
      out.push_back(cat->labels.at(static_cast<std::size_t>(x[i])));
    } else {
      out.push_back(x[i]);
    }
  }
  return out;
}

Classifier parseClassifier(const json& j, const std::vector<FeatureDomain>& domains,
                           const std::vector<std::string>& classes, const std::string& path) {
  const auto& kindJ = field(j, "kind", path);
  if (!kindJ.is_string()) fail(path + ".kind", "expected a string");
  const auto kind = kindJ.get<std::string>();
  const auto m = domains.size();

  if (kind == "lookup") {
    LookupTable t;
    t.defaultClass = classRef(field(j, "default", path), classes, path + ".default");
    const auto& entries = array(field(j, "entries", path), path + ".entries");
    for (std::size_t n = 0; n < entries.size(); ++n) {
      const auto p = path + ".entries[" + std::to_string(n) + "]";
      auto pt = pointFromDomains(field(entries[n], "point", p), domains, p + ".point");
      auto label = classRef(field(entries[n], "label", p), classes, p + ".label");
      if (!t.entries.emplace(std::move(pt), label).second) fail(p, "duplicate lookup entry");
    }
    return t;
  }
  if (kind == "linear") {
    LinearThreshold c;
    c.weights = numbers(field(j, "weights", path), path + ".weights");
    if (c.weights.size() != m) fail(path + ".weights", "expected " + std::to_string(m) + " weights");
    c.bias = number(field(j, "bias", path), path + ".bias");
    c.posClass = classRef(field(j, "positive", path), classes, path + ".positive");
    c.negClass = classRef(field(j, "negative", path), classes, path + ".negative");
    return c;
  }
  if (kind == "region") {
    RegionConjunction c;
    const auto& cons = array(field(j, "constraints", path), path + ".constraints");
    for (std::size_t n = 0; n < cons.size(); ++n) {
      const auto p = path + ".constraints[" + std::to_string(n) + "]";
      LinearConstraint lc;
      lc.coeffs = numbers(field(cons[n], "coeffs", p), p + ".coeffs");
      if (lc.coeffs.size() != m) fail(p + ".coeffs", "expected " + std::to_string(m) + " coefficients");
      lc.rel = parseRelation(field(cons[n], "op", p), p + ".op");
      lc.rhs = number(field(cons[n], "rhs", p), p + ".rhs");
      c.constraints.push_back(std::move(lc));
    }
    c.insideClass = classRef(field(j, "inside", path), classes, path + ".inside");
    c.outsideClass = classRef(field(j, "outside", path), classes, path + ".outside");
    return c;
  }
  if (kind == "tree") {
    DecisionTree t;
    const auto& nodes = array(field(j, "nodes", path), path + ".nodes");
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      const auto p = path + ".nodes[" + std::to_string(n) + "]";
      const auto& nj = nodes[n];
      TreeNode node;
      if (nj.contains("leaf")) {
        node.leaf = true;
        node.label = classRef(nj["leaf"], classes, p + ".leaf");
      } else {
        const auto& f = field(nj, "feature", p);
        if (!f.is_number_unsigned() || f.get<std::size_t>() < 1 || f.get<std::size_t>() > m) {
          fail(p + ".feature", "expected a feature index in 1.." + std::to_string(m));
        }
        node.feature = f.get<std::size_t>();
        if (nj.contains("categories")) {
          const auto* cat = std::get_if<Categorical>(&domains[node.feature - 1].kind());
          if (!cat) fail(p, "categorical split on a non-categorical feature");
          node.categorical = true;
          for (const auto& c : array(nj["categories"], p + ".categories")) {
            auto it = std::find(cat->labels.begin(), cat->labels.end(), c.is_string() ? c.get<std::string>() : "");
            if (it == cat->labels.end()) fail(p + ".categories", "unknown category");
            node.categories.push_back(static_cast<std::size_t>(it - cat->labels.begin()));
          }
        } else {
          node.threshold = number(field(nj, "threshold", p), p + ".threshold");
        }
        const auto& l = field(nj, "left", p);
        const auto& r = field(nj, "right", p);
        if (!l.is_number_unsigned() || !r.is_number_unsigned()) fail(p, "child indices must be non-negative integers");
        node.left = l.get<std::size_t>();
        node.right = r.get<std::size_t>();
      }
      t.nodes.push_back(std::move(node));
    }
    validateTree(t, m);
    return t;
  }
  fail(path + ".kind", "unknown classifier kind '" + kind + "'");
}

json domainToJson(const FeatureDomain& d) {
  return std::visit(
      [](const auto& k) -> json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Categorical>) {
          return {{"kind", "categorical"}, {"values", k.labels}};
        } else if constexpr (std::is_same_v<T, DiscreteOrdinal>) {
          return {{"kind", "discrete"}, {"values", k.values}};
        } else {
          json j = {{"kind", "continuous"}, {"lo", k.lo}, {"hi", k.hi}};
          if (k.gridStep) j["grid"] = *k.gridStep;
          return j;
        }
      },
      d.kind());
}

json classifierToJson(const ClassificationProblem& p) {
  const auto& cls = p.classes();
  return std::visit(
      [&](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, LookupTable>) {
          json entries = json::array();
          for (const auto& [pt, label] : c.entries) {
            entries.push_back({{"point", pointToJsonDomains(pt, p.domains())}, {"label", cls[label]}});
          }
          return {{"kind", "lookup"}, {"default", cls[c.defaultClass]}, {"entries", entries}};
        } else if constexpr (std::is_same_v<T, LinearThreshold>) {
          return {{"kind", "linear"}, {"weights", c.weights}, {"bias", c.bias},
                  {"positive", cls[c.posClass]}, {"negative", cls[c.negClass]}};
        } else if constexpr (std::is_same_v<T, RegionConjunction>) {
          json cons = json::array();
          for (const auto& lc : c.constraints) {
            cons.push_back({{"coeffs", lc.coeffs}, {"op", relationText(lc.rel)}, {"rhs", lc.rhs}});
          }
          return {{"kind", "region"}, {"constraints", cons}, {"inside", cls[c.insideClass]},
                  {"outside", cls[c.outsideClass]}};
        } else {
          json nodes = json::array();
          for (const auto& n : c.nodes) {
            if (n.leaf) {
              nodes.push_back({{"leaf", cls[n.label]}});
              continue;
            }
            json nj = {{"feature", n.feature}, {"left", n.left}, {"right", n.right}};
            if (n.categorical) {
              const auto& cat = std::get<Categorical>(p.domain(n.feature).kind());
              json labels = json::array();
              for (auto k : n.categories) labels.push_back(cat.labels.at(k));
              nj["categories"] = labels;
            } else {
              nj["threshold"] = n.threshold;
            }
            nodes.push_back(std::move(nj));
          }
          return {{"kind", "tree"}, {"nodes", nodes}};
        }
      },
      p.classifier());
}

}  // namespace

ModelDocument parseModel(const json& doc) {
  if (!doc.is_object()) fail("$", "model document must be an object");
  const auto& schema = field(doc, "schema", "$");
  if (!schema.is_number_integer() || schema.get<int>() != kModelSchemaVersion) {
    fail("$.schema", "unsupported schema version (expected " + std::to_string(kModelSchemaVersion) + ")");
  }
  const auto& feats = array(field(doc, "features", "$"), "$.features");
  if (feats.empty()) fail("$.features", "at least one feature required");
  std::vector<FeatureDomain> domains;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < feats.size(); ++i) {
    const auto p = "$.features[" + std::to_string(i) + "]";
    domains.push_back(parseDomain(field(feats[i], "domain", p), p + ".domain"));
    names.push_back(feats[i].contains("name") && feats[i]["name"].is_string()
                        ? feats[i]["name"].get<std::string>()
                        : "x" + std::to_string(i + 1));
  }
  std::vector<std::string> classes;
  const auto& cls = array(field(doc, "classes", "$"), "$.classes");
  for (std::size_t k = 0; k < cls.size(); ++k) classes.push_back(labelText(cls[k], "$.classes[" + std::to_string(k) + "]"));

  auto classifier = parseClassifier(field(doc, "classifier", "$"), domains, classes, "$.classifier");
  std::optional<ClassificationProblem> problem;
  try {
    problem.emplace(std::move(domains), std::move(classes), std::move(classifier), std::move(names));
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    fail("$", e.what());
  }

  std::optional<Instance> instance;
  if (doc.contains("instance")) {
    const auto& inst = doc["instance"];
    Instance in;
    in.point = pointFromDomains(field(inst, "point", "$.instance"), problem->domains(), "$.instance.point");
    in.label = classRef(field(inst, "label", "$.instance"), problem->classes(), "$.instance.label");
    instance = std::move(in);
  }
  return ModelDocument{std::move(*problem), std::move(instance)};
}

ModelDocument parseModel(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed model document: ") + e.what());
  }
  return parseModel(doc);
}

ModelDocument loadModelFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open model file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  return parseModel(std::string_view(text));
}

json modelToJson(const ClassificationProblem& problem, const std::optional<Instance>& instance) {
  json feats = json::array();
  for (std::size_t i = 0; i < problem.featureCount(); ++i) {
    feats.push_back({{"name", problem.featureNames()[i]}, {"domain", domainToJson(problem.domains()[i])}});
  }
  json doc = {{"schema", kModelSchemaVersion},
              {"features", feats},
              {"classes", problem.classes()},
              {"classifier", classifierToJson(problem)}};
  if (instance) {
    doc["instance"] = {{"point", pointToJson(instance->point, problem)},
                       {"label", problem.classes().at(instance->label)}};
  }
  return doc;
}

Instance parseInstance(std::string_view text, const ClassificationProblem& problem) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos) throw SchemaError("instance must look like 'v1,...,vm:c'");
  const std::string coords(text.substr(0, colon));
  const std::string label(text.substr(colon + 1));

  json arr = json::array();
  std::stringstream ss(coords);
  std::string tok;
  std::size_t i = 0;
  while (std::getline(ss, tok, ',')) {
    if (i < problem.featureCount() && problem.domains()[i].isCategorical()) {
      arr.push_back(tok);
    } else {
      try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        arr.push_back(v);
      } catch (const std::exception&) {
        throw SchemaError("instance coordinate '" + tok + "' is not a number");
      }
    }
    ++i;
  }
  Instance in;
  in.point = pointFromDomains(arr, problem.domains(), "instance");
  auto c = problem.classIndex(label);
  if (!c) throw SchemaError("instance label '" + label + "' is not a class");
  in.label = *c;
  return in;
}

json pointToJson(const Point& x, const ClassificationProblem& problem) {
  return pointToJsonDomains(x, problem.domains());
}

Point pointFromJson(const json& j, const ClassificationProblem& problem, const std::string& path) {
  return pointFromDomains(j, problem.domains(), path);
}

}  // namespace drxp
