#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "nba/eval/dataset.hpp"

namespace nba {

struct LeakageHit {
  std::string file;
  std::string gold;
  std::string item_id;
};

struct LeakageReport {
  std::vector<std::string> files_scanned;
  std::size_t golds_checked = 0;
  std::vector<LeakageHit> hits;
  /// Gold strings skipped because they belong to a task's closed answer
  /// vocabulary (chromosome labels, TRUE/NA, species names).
  std::set<std::string> exempted;
};

/// Golds of these tasks come from a small fixed vocabulary that prompts and
/// lookup tables must be able to name; they are reported, not counted.
bool is_closed_vocabulary(TaskType task, const std::string& gold);

/// Case-insensitive whole-word scan of every regular file under `roots`.
LeakageReport audit_leakage(const std::vector<DatasetItem>& items, const std::vector<std::filesystem::path>& roots);

}  // namespace nba
