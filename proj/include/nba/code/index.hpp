#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nba/gateway/gateway.hpp"
#include "nba/plans/task_type.hpp"

namespace nba {

class ModelMismatch : public Error {
 public:
  using Error::Error;
};

inline constexpr double kDefaultMatchThreshold = 0.95;

/// Stored questions with their embeddings.
///
///   {"schema_version": 1, "embedding_model_id": "...", "threshold": 0.95,
///    "dimension": 256, "entries": [{"question", "task", "vector"}]}
struct EmbeddingIndex {
  std::string embedding_model_id;
  double threshold = kDefaultMatchThreshold;
  std::size_t dimension = 0;
  struct Entry {
    std::string question;
    TaskType task = TaskType::Unknown;
    std::vector<double> vector;
  };
  std::vector<Entry> entries;

  /// Same dimension everywhere, threshold in (0, 1], all nine tasks
  /// covered. Throws SchemaError.
  void validate() const;
};

nlohmann::json to_json(const EmbeddingIndex& index);
EmbeddingIndex index_from_json(const nlohmann::json& j, const std::string& origin);
EmbeddingIndex load_index(const std::filesystem::path& path);
void save_index(const EmbeddingIndex& index, const std::filesystem::path& path);

struct LabeledQuestion {
  std::string question;
  TaskType task;
};

/// Embeds every question through the gateway, in order.
EmbeddingIndex build_index(const std::vector<LabeledQuestion>& questions, ModelGateway& gateway,
                           const ModelEndpoint& endpoint, double threshold = kDefaultMatchThreshold);

struct TaskMatch {
  TaskType task;
  double similarity;
  std::string matched_question;
};

/// Best entry by cosine similarity; the first one wins ties. Returns
/// nullopt under the threshold. Throws ModelMismatch when the vector was
/// made by another model than the index.
std::optional<TaskMatch> match_task(std::span<const double> query, const std::string& query_model_id,
                                    const EmbeddingIndex& index);
/// Highest similarity regardless of threshold (diagnostics).
TaskMatch best_match(std::span<const double> query, const EmbeddingIndex& index);

}  // namespace nba
