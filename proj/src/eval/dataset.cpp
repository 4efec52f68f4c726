#include "nba/eval/dataset.hpp"

#include <fstream>
#include <map>
#include <set>

#include "nba/common/text.hpp"

namespace nba {

using nlohmann::json;

namespace {

std::vector<std::string> legacy_gold(TaskType task, const json& answer) {
  std::vector<std::string> gold;
  if (answer.is_array()) {
    for (const auto& a : answer) gold.push_back(a.get<std::string>());
  } else {
    const auto s = answer.is_string() ? answer.get<std::string>() : answer.dump();
    if (task == TaskType::GeneDiseaseAssociation)
      for (auto& g : text::split_any(s, ",;")) gold.push_back(text::trim(g));
    else
      gold.push_back(s);
  }
  return gold;
}

void check_counts(const std::vector<DatasetItem>& items, const std::string& origin, const DatasetOptions& options) {
  std::map<TaskType, std::size_t> per_task;
  std::size_t excluded = 0;
  for (const auto& it : items) {
    ++per_task[it.task];
    excluded += it.excluded ? 1 : 0;
  }
  if (options.expected_per_task > 0) {
    for (auto t : kAllTasks) {
      const auto n = per_task[t];
      if (n != options.expected_per_task)
        throw TaskCountMismatch(origin + ": task " + std::string(to_string(t)) + " has " + std::to_string(n) +
                                " items, expected " + std::to_string(options.expected_per_task));
    }
  }
  if (!items.empty() && static_cast<double>(excluded) > options.max_excluded_fraction * items.size() + 1e-9)
    throw SchemaError(origin + ": " + std::to_string(excluded) + " of " + std::to_string(items.size()) +
                      " items excluded, above the allowed fraction");
}

}  // namespace

std::vector<DatasetItem> dataset_from_json(const json& j, const std::string& origin, const DatasetOptions& options) {
  if (!j.is_object()) throw SchemaError(origin + ": dataset must be a JSON object");
  std::vector<DatasetItem> items;
  if (j.contains("schema_version")) {
    if (j["schema_version"] != 1) throw SchemaError(origin + ": unsupported dataset schema_version");
    if (!j.contains("items") || !j["items"].is_array()) throw SchemaError(origin + ": dataset has no items array");
    std::set<std::string> ids;
    for (const auto& e : j["items"]) {
      DatasetItem it;
      try {
        it.id = e.at("id").get<std::string>();
        auto task = task_from_string(e.at("task").get<std::string>());
        if (!task || *task == TaskType::Unknown) throw SchemaError(origin + ": item " + it.id + " has an unknown task");
        it.task = *task;
        it.question = e.at("question").get<std::string>();
        it.gold = e.at("gold").get<std::vector<std::string>>();
        it.excluded = e.value("excluded", false);
        it.refinement_note = e.value("refinement_note", "");
      } catch (const json::exception& ex) {
        throw SchemaError(origin + ": malformed item: " + ex.what());
      }
      if (it.question.empty()) throw SchemaError(origin + ": item " + it.id + " has an empty question");
      if (it.gold.empty() && !it.excluded) throw SchemaError(origin + ": item " + it.id + " has no gold answer");
      if (!ids.insert(it.id).second) throw SchemaError(origin + ": duplicate item id " + it.id);
      items.push_back(std::move(it));
    }
  } else {
    for (const auto& [name, qa] : j.items()) {
      auto task = task_from_string(name);
      if (!task || *task == TaskType::Unknown) throw SchemaError(origin + ": unknown task '" + name + "'");
      if (!qa.is_object()) throw SchemaError(origin + ": task '" + name + "' is not a question map");
      std::size_t n = 0;
      for (const auto& [q, a] : qa.items()) {
        DatasetItem it;
        it.id = std::string(to_string(*task)) + "-" + std::to_string(n++);
        it.task = *task;
        it.question = q;
        it.gold = legacy_gold(*task, a);
        items.push_back(std::move(it));
      }
    }
    std::stable_sort(items.begin(), items.end(),
                     [](const DatasetItem& a, const DatasetItem& b) { return task_index(a.task) < task_index(b.task); });
  }
  check_counts(items, origin, options);
  return items;
}

std::vector<DatasetItem> load_dataset(const std::filesystem::path& path, const DatasetOptions& options) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
  return dataset_from_json(j, path.string(), options);
}

json dataset_to_json(const std::vector<DatasetItem>& items, const std::string& name) {
  json arr = json::array();
  for (const auto& it : items)
    arr.push_back({{"id", it.id},
                   {"task", to_string(it.task)},
                   {"question", it.question},
                   {"gold", it.gold},
                   {"excluded", it.excluded},
                   {"refinement_note", it.refinement_note}});
  return {{"schema_version", 1}, {"name", name}, {"items", arr}};
}

}  // namespace nba
