#include "nba/code/index.hpp"

#include <fstream>
#include <set>

#include "nba/code/similarity.hpp"
#include "nba/common/text.hpp"

namespace nba {

using nlohmann::json;

void EmbeddingIndex::validate() const {
  if (embedding_model_id.empty()) throw SchemaError("embedding index has no embedding_model_id");
  if (!(threshold > 0.0 && threshold <= 1.0)) throw SchemaError("embedding index threshold must be in (0, 1]");
  if (entries.empty()) throw SchemaError("embedding index is empty");
  std::set<TaskType> covered;
  for (const auto& e : entries) {
    if (e.vector.size() != dimension)
      throw SchemaError("index entry '" + e.question + "' has dimension " + std::to_string(e.vector.size()) +
                        ", expected " + std::to_string(dimension));
    covered.insert(e.task);
  }
  for (auto t : kAllTasks)
    if (!covered.contains(t)) throw SchemaError("embedding index has no entry for " + std::string(to_string(t)));
}

json to_json(const EmbeddingIndex& index) {
  json entries = json::array();
  for (const auto& e : index.entries)
    entries.push_back({{"question", e.question}, {"task", to_string(e.task)}, {"vector", e.vector}});
  return {{"schema_version", 1},
          {"embedding_model_id", index.embedding_model_id},
          {"threshold", index.threshold},
          {"dimension", index.dimension},
          {"entries", entries}};
}

EmbeddingIndex index_from_json(const json& j, const std::string& origin) {
  if (!j.is_object() || j.value("schema_version", 0) != 1) throw SchemaError(origin + ": unsupported index schema");
  EmbeddingIndex idx;
  try {
    idx.embedding_model_id = j.at("embedding_model_id").get<std::string>();
    idx.threshold = j.at("threshold").get<double>();
    idx.dimension = j.at("dimension").get<std::size_t>();
    for (const auto& e : j.at("entries")) {
      auto task = task_from_string(e.at("task").get<std::string>());
      if (!task || *task == TaskType::Unknown) throw SchemaError(origin + ": entry with unknown task");
      idx.entries.push_back({e.at("question").get<std::string>(), *task, e.at("vector").get<std::vector<double>>()});
    }
  } catch (const json::exception& ex) {
    throw SchemaError(origin + ": " + ex.what());
  }
  idx.validate();
  return idx;
}

EmbeddingIndex load_index(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open embedding index " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
  return index_from_json(j, path.string());
}

void save_index(const EmbeddingIndex& index, const std::filesystem::path& path) {
  index.validate();
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write embedding index " + path.string());
  out << to_json(index).dump() << '\n';
}

EmbeddingIndex build_index(const std::vector<LabeledQuestion>& questions, ModelGateway& gateway,
                           const ModelEndpoint& endpoint, double threshold) {
  EmbeddingIndex idx;
  idx.embedding_model_id = endpoint.model_id;
  idx.threshold = threshold;
  for (const auto& q : questions) {
    auto e = gateway.embed(endpoint, q.question);
    if (idx.entries.empty()) idx.dimension = e.vector.size();
    idx.entries.push_back({q.question, q.task, std::move(e.vector)});
  }
  idx.validate();
  return idx;
}

TaskMatch best_match(std::span<const double> query, const EmbeddingIndex& index) {
  if (index.entries.empty()) throw PreconditionError("embedding index is empty");
  const EmbeddingIndex::Entry* best = nullptr;
  double best_sim = -2;
  for (const auto& e : index.entries) {
    const double s = cosine_similarity(query, e.vector);
    if (s > best_sim) {
      best_sim = s;
      best = &e;
    }
  }
  return {best->task, best_sim, best->question};
}

std::optional<TaskMatch> match_task(std::span<const double> query, const std::string& query_model_id,
                                    const EmbeddingIndex& index) {
  if (query_model_id != index.embedding_model_id)
    throw ModelMismatch("question embedded with " + query_model_id + " but the index was built with " +
                        index.embedding_model_id);
  auto m = best_match(query, index);
  if (m.similarity < index.threshold) return std::nullopt;
  return m;
}

}  // namespace nba
