#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nba/exec/trace.hpp"
#include "nba/plans/task_type.hpp"

namespace nba {

enum class Method { agentic, code, direct, genegpt };

std::string_view to_string(Method m);
std::optional<Method> method_from_string(std::string_view s);

/// Everything one question's resolution produced.
/// Invariants: total_usage == sum_usage(traces); code records hold no
/// ModelCall trace.
struct AnswerRecord {
  std::string question;
  Method method = Method::agentic;
  std::string model;  // endpoint name; the embedding endpoint for code mode
  TaskType task = TaskType::Unknown;
  std::string final_answer;      // user-facing text
  std::string canonical_answer;  // normalized short form used for scoring
  std::vector<StepTrace> traces;
  UsageMetrics total_usage;
  std::optional<std::string> error;
  std::string error_cause;  // exception type of `error`, e.g. "Unmatched"
  std::vector<std::string> warnings;
  std::int64_t elapsed_ms = 0;
  std::int64_t excluded_wait_ms = 0;

  bool ok() const { return !error.has_value(); }
  void recompute_usage() { total_usage = sum_usage(traces); }
  bool operator==(const AnswerRecord&) const = default;
};

nlohmann::json to_json(const AnswerRecord& r);
AnswerRecord answer_record_from_json(const nlohmann::json& j);

/// Canonical short form: lower-case, trimmed, whitespace collapsed,
/// surrounding quotes and a final period dropped. Chromosome and
/// coordinate answers get a "chr" prefix; gene lists become ", "-joined.
/// Idempotent.
std::string normalize_answer(AnswerKind kind, std::string_view answer);
std::string normalize_answer(TaskType task, std::string_view answer);

/// Gene symbols as the list scorer sees them: split on commas, semicolons
/// and whitespace, each symbol normalized, duplicates dropped.
std::vector<std::string> split_gene_list(std::string_view answer);

}  // namespace nba
