#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "nba/exec/executor.hpp"
#include "nba/ncbi/toolbox.hpp"

namespace nba {

/// Named string maps used by table.lookup steps, e.g. scientific name ->
/// common name. Keys match case-insensitively.
///
///   {"schema_version": 1, "tables": {"species_common_names": {"Homo sapiens": "human"}}}
class LookupTables {
 public:
  static LookupTables from_json(const nlohmann::json& j, const std::string& origin);
  static LookupTables load(const std::filesystem::path& path);

  std::optional<std::string> lookup(const std::string& table, const std::string& key) const;
  bool has_table(const std::string& table) const { return tables_.contains(table); }
  const std::map<std::string, std::map<std::string, std::string>>& tables() const { return tables_; }

 private:
  std::map<std::string, std::map<std::string, std::string>> tables_;  // keys lower-cased
};

/// Handlers for every ToolCall and Transform target of the built-in
/// registry, backed by the toolbox. Model steps are supplied separately by
/// the agentic and code paths.
HandlerTable make_tool_handlers(std::shared_ptr<NcbiToolbox> toolbox, std::shared_ptr<const LookupTables> tables);

}  // namespace nba
