#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "conediff/derivative.hpp"
#include "conediff/embedding.hpp"
#include "conediff/errors.hpp"

namespace conediff::io {

using Json = nlohmann::json;

/// Malformed file content; field() is a JSON path such as "cones.soc[0]".
class ParseError : public InputError {
 public:
  ParseError(std::string field, const std::string& message)
      : InputError(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Reads and parses a JSON file; syntax errors carry line/column.
Json read_json_file(const std::filesystem::path& path);

ConeSpec cones_from_json(const Json& j, const std::string& path = "cones");
Json cones_to_json(const ConeSpec& spec);

/// {"m", "n", "A": {"rows", "cols", "vals"}, "b", "c", "cones"}; extra
/// top-level keys are ignored on read.
ConeProgramData problem_from_json(const Json& j);
Json problem_to_json(const ConeProgramData& data);

Json solution_to_json(const Solution& sol);
/// x, y, s of a solution file, checked against the problem dimensions.
SolutionTriple solution_triple_from_json(const Json& j,
                                         const ConeProgramData& data);

/// Forward perturbation file. "dA" is either {"vals": [...]} in pattern order
/// or {"rows", "cols", "vals"} naming entries that must lie in the pattern.
ProgramPerturbation program_perturbation_from_json(const Json& j,
                                                   const ConeProgramData& data);
/// dA is emitted in pattern order together with its rows and cols.
Json program_perturbation_to_json(const ProgramPerturbation& p,
                                  const ConeProgramData& data);

SolutionPerturbation solution_perturbation_from_json(
    const Json& j, const ConeProgramData& data);
Json solution_perturbation_to_json(const SolutionPerturbation& q);

Json report_to_json(const GradientCheckReport& report);

Json vector_to_json(const Vector& v);

}  // namespace conediff::io
