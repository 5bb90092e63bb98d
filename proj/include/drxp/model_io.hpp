#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "drxp/problem.hpp"

namespace drxp {

inline constexpr int kModelSchemaVersion = 1;

/// A parsed model document; `instance` is present when the document embeds
/// one (used by benchmark fixture suites).
struct ModelDocument {
  ClassificationProblem problem;
  std::optional<Instance> instance;
};

/// Throws SchemaError with the offending JSON path.
ModelDocument parseModel(std::string_view text);
ModelDocument parseModel(const nlohmann::json& doc);
ModelDocument loadModelFile(const std::string& path);

nlohmann::json modelToJson(const ClassificationProblem& problem,
                           const std::optional<Instance>& instance = {});

/// "v1,...,vm:c"; categorical values are given by label.
Instance parseInstance(std::string_view text, const ClassificationProblem& problem);

nlohmann::json pointToJson(const Point& x, const ClassificationProblem& problem);
Point pointFromJson(const nlohmann::json& j, const ClassificationProblem& problem,
                    const std::string& path = "point");

}  // namespace drxp
