#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nba/eval/scoring.hpp"
#include "nba/exec/answer.hpp"

namespace nba {

struct QuestionResult {
  std::size_t item_index = 0;  // position in the dataset
  std::string item_id;
  TaskType task = TaskType::Unknown;
  std::string question;
  Method method = Method::agentic;
  std::string model;
  std::string prediction;  // canonical answer, empty on failure
  std::vector<std::string> gold;
  double score = 0;
  UsageMetrics usage;
  std::optional<double> cost;  // empty when the model has no price
  std::string error_cause;     // empty on success
};

struct GroupScore {
  std::string model;
  Method method = Method::agentic;
  std::map<TaskType, double> per_task;  // mean score
  std::map<TaskType, std::size_t> per_task_count;
  double overall = 0;  // mean of the per-task means
  std::uint64_t est_tokens_in = 0;
  std::uint64_t est_tokens_out = 0;
  double dollars = 0;  // sum of priced rows
  bool cost_complete = true;
  std::size_t questions = 0;
  std::size_t failures = 0;
};

/// Deterministic by construction: no timing and rows sorted by
/// (model, method) group order, then task, then dataset position.
struct ScoreReport {
  ScoringMode mode = ScoringMode::strict;
  std::vector<QuestionResult> rows;
  std::vector<GroupScore> groups;
  double total_dollars = 0;
  std::uint64_t total_tokens_in = 0;
  std::uint64_t total_tokens_out = 0;
  std::vector<std::string> warnings;

  const GroupScore* group(const std::string& model, Method method) const;
  double failure_rate() const;
};

/// Sorts rows and derives every aggregate from them. `group_order` fixes
/// the order of (model, method) groups; groups absent from it follow in
/// sorted order.
ScoreReport build_report(std::vector<QuestionResult> rows, ScoringMode mode,
                         const std::vector<std::pair<std::string, Method>>& group_order = {});

nlohmann::json summary_json(const ScoreReport& report);
std::string per_question_csv(const ScoreReport& report);
std::string per_task_csv(const ScoreReport& report);
/// Groups as rows, the nine tasks plus overall as columns.
std::string heatmap_csv(const ScoreReport& report);
/// Fixed-width table for the terminal.
std::string format_table(const ScoreReport& report);

/// per_question.csv, per_task.csv, heatmap.csv, summary.json.
void write_reports(const ScoreReport& report, const std::filesystem::path& dir);

/// RFC 4180 quoting when needed.
std::string csv_field(std::string_view s);
/// Shortest round-trippable decimal ("%.17g" trimmed).
std::string format_number(double v);

}  // namespace nba
