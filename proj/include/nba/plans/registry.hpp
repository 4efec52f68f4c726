#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nba/plans/plan.hpp"

namespace nba {

/// Declared interface of anything a plan step may target.
struct ToolSignature {
  std::string name;
  StepKind kind = StepKind::ToolCall;
  std::map<std::string, bool> inputs;  // name -> required
  std::vector<std::string> output_fields;
  /// The step's own `params` list defines its output fields (parameter inference).
  bool fields_from_params = false;
};

class ToolRegistry {
 public:
  /// Throws DuplicateTool when the name is taken.
  void register_tool(ToolSignature signature);
  const ToolSignature* find(std::string_view name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, ToolSignature, std::less<>> tools_;
};

/// Signatures of the tools, transforms and model prompts shipped with the
/// engine.
void register_builtin_tools(ToolRegistry& registry);
ToolRegistry builtin_tool_registry();

/// Full semantic validation; throws SchemaError, UnknownTool or BindingError.
void validate_plan(const Plan& plan, const ToolRegistry& tools);

struct PlanDocument {
  std::string origin;  // file name, for messages
  std::string text;
};

/// Every *.json file in `dir`, sorted by file name.
std::vector<PlanDocument> read_plan_directory(const std::filesystem::path& dir);

/// Immutable task -> plan map. Shareable across threads once built.
class PlanRegistry {
 public:
  /// Each document holds one plan or a bundle {"schema_version":1,"plans":[...]}.
  static PlanRegistry load(std::span<const PlanDocument> docs, const ToolRegistry& tools);
  static PlanRegistry load_directory(const std::filesystem::path& dir, const ToolRegistry& tools);

  /// Throws NoPlanForTask for Unknown or an uncovered task.
  const Plan& retrieve_plan(TaskType task) const;
  bool covers(TaskType task) const { return plans_.contains(task); }
  std::size_t size() const { return plans_.size(); }
  std::vector<TaskType> tasks() const;

 private:
  std::map<TaskType, Plan> plans_;
};

}  // namespace nba
