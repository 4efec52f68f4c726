#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nba/common/error.hpp"
#include "nba/plans/task_type.hpp"

namespace nba {

class UnknownTool : public Error {
 public:
  using Error::Error;
};
class BindingError : public Error {
 public:
  using Error::Error;
};
class NoPlanForTask : public Error {
 public:
  using Error::Error;
};
class DuplicateTool : public Error {
 public:
  using Error::Error;
};

enum class StepKind { ToolCall, ModelCall, Transform, Embedding };

std::string_view to_string(StepKind k);
std::optional<StepKind> step_kind_from_string(std::string_view s);

/// Where a step input takes its value from.
///
///   {"literal": "gene"}             fixed text
///   {"question": true}              the user question
///   {"ref": "hits.first_id"}        output (or output field) of an earlier step
///   {"template": "{args.gene}[sym]"} text with {ref} / {question} placeholders
struct Binding {
  enum class Kind { Literal, Question, Ref, Template };

  Kind kind = Kind::Literal;
  std::string value;

  static Binding literal(std::string v) { return {Kind::Literal, std::move(v)}; }
  static Binding question() { return {Kind::Question, {}}; }
  static Binding ref(std::string v) { return {Kind::Ref, std::move(v)}; }
  static Binding templated(std::string v) { return {Kind::Template, std::move(v)}; }

  /// Every reference this binding needs, "question" included.
  std::vector<std::string> references() const;

  bool operator==(const Binding&) const = default;
};

/// One value to pull out of the question by a model (or by the
/// deterministic extractor in code mode).
struct ParamSpec {
  std::string name;
  std::string kind;  // gene_symbol | ensembl_id | rsid | dna | text
  bool required = true;
  std::string description;

  bool operator==(const ParamSpec&) const = default;
};

struct PlanStep {
  std::string id;
  StepKind kind = StepKind::ToolCall;
  std::string target;
  std::map<std::string, Binding> inputs;
  std::vector<ParamSpec> params;
  std::string output;

  bool operator==(const PlanStep&) const = default;
};

struct Plan {
  TaskType task = TaskType::Unknown;
  std::string description;
  std::vector<PlanStep> steps;
  std::string answer;  // "output" or "output.field"

  bool operator==(const Plan&) const = default;
};

/// Splits "out.field" into {"out", "field"}; field is empty for a bare id.
std::pair<std::string, std::string> split_reference(std::string_view ref);

/// Placeholders of a template binding, in order of appearance.
std::vector<std::string> template_references(std::string_view tmpl);

inline constexpr int kPlanSchemaVersion = 1;

nlohmann::json plan_to_json(const Plan& plan);
/// Structural parse only; semantic checks live in validate_plan.
Plan plan_from_json(const nlohmann::json& j, const std::string& origin);

const std::vector<std::string>& param_kinds();

}  // namespace nba
