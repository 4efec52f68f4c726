#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nba/gateway/gateway.hpp"
#include "nba/plans/task_type.hpp"

namespace nba {

/// Versioned prompt texts (config/prompts.json). Each prompt has a system
/// and a user template with {{var}} placeholders.
///
///   {"schema_version": 1, "version": "...",
///    "document_budget": 6000,
///    "prompts": {"classify": {"system": "...", "user": "..."}, ...},
///    "goals": {"official_symbol": "..."},
///    "answer_formats": {"Symbol": "..."}}
class PromptSet {
 public:
  static PromptSet from_json(const nlohmann::json& j, const std::string& origin);
  static PromptSet load(const std::filesystem::path& path);

  /// Throws ConfigError for an unknown prompt name.
  std::vector<ChatMessage> render(const std::string& name, const std::map<std::string, std::string>& vars) const;
  /// Description of a parse_document goal; ConfigError when missing.
  const std::string& goal(const std::string& name) const;
  const std::string& answer_format(AnswerKind kind) const;
  std::size_t document_budget() const { return document_budget_; }
  const std::string& version() const { return version_; }
  /// Every template text, for the leakage audit.
  std::vector<std::string> all_texts() const;

 private:
  struct Prompt {
    std::string system;
    std::string user;
  };
  std::string version_;
  std::size_t document_budget_ = 6000;
  std::map<std::string, Prompt> prompts_;
  std::map<std::string, std::string> goals_;
  std::map<std::string, std::string> formats_;
};

/// Hand-written in-context examples for the classifier, never taken from
/// the benchmark.
///
///   {"schema_version": 1, "examples": [{"task": "GeneAlias", "question": "..."}]}
struct ClassifierExamples {
  struct Example {
    TaskType task;
    std::string question;
  };
  std::vector<Example> examples;

  static ClassifierExamples from_json(const nlohmann::json& j, const std::string& origin);
  static ClassifierExamples load(const std::filesystem::path& path);

  /// The first k per task, in task order.
  std::vector<Example> pick(std::size_t k_per_task) const;
};

std::string_view to_string(AnswerKind k);

}  // namespace nba
