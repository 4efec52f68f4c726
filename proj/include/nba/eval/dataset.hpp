#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nba/common/error.hpp"
#include "nba/plans/task_type.hpp"

namespace nba {

class TaskCountMismatch : public Error {
 public:
  using Error::Error;
};

struct DatasetItem {
  std::string id;
  TaskType task = TaskType::Unknown;
  std::string question;
  std::vector<std::string> gold;  // acceptable answers; gene lists hold one symbol per element
  bool excluded = false;
  std::string refinement_note;
};

struct DatasetOptions {
  /// Items required per task before exclusion; 0 skips the check.
  std::size_t expected_per_task = 50;
  /// Largest tolerated excluded fraction.
  double max_excluded_fraction = 0.02;
};

/// Native format:
///
///   {"schema_version": 1, "name": "...", "items": [
///     {"id", "task", "question", "gold": [...], "excluded": false, "refinement_note": ""}]}
///
/// The legacy GeneGPT layout {"<task display name>": {"<question>": "<answer>"}}
/// is accepted too (no exclusions, one gold string per item; gene lists
/// split on commas).
///
/// Throws SchemaError, TaskCountMismatch.
std::vector<DatasetItem> load_dataset(const std::filesystem::path& path, const DatasetOptions& options = {});
std::vector<DatasetItem> dataset_from_json(const nlohmann::json& j, const std::string& origin,
                                           const DatasetOptions& options = {});
nlohmann::json dataset_to_json(const std::vector<DatasetItem>& items, const std::string& name);

}  // namespace nba
