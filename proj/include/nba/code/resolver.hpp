#pragma once

#include <memory>
#include <optional>
#include <stop_token>

#include "nba/code/index.hpp"
#include "nba/exec/answer.hpp"
#include "nba/exec/executor.hpp"
#include "nba/plans/registry.hpp"

namespace nba {

/// No stored question is similar enough.
class Unmatched : public Error {
 public:
  using Error::Error;
};

/// Deterministic stand-ins for the plans' ModelCall targets:
/// infer_parameters -> extract_arguments, parse_document -> extract_field.
/// Their traces are labeled Transform.
HandlerTable make_code_model_handlers(TaskType task);

struct CodeResolverDeps {
  std::shared_ptr<const PlanRegistry> plans;
  HandlerTable tools;
  std::shared_ptr<const EmbeddingIndex> index;
  std::shared_ptr<ModelGateway> gateway;
  ModelEndpoint embedding;
  std::shared_ptr<Clock> clock;
  std::shared_ptr<LogSink> log;
  Millis budget{120'000};
};

/// Model-free path: embedding match against stored questions, pattern
/// argument extraction, the task's plan with deterministic parsers.
/// Safe for concurrent use.
class CodeResolver {
 public:
  explicit CodeResolver(CodeResolverDeps deps);

  struct Match {
    std::optional<TaskMatch> match;
    StepTrace trace;  // kind Embedding
  };
  /// Embeds and matches; errors end up in the trace.
  Match match(const std::string& question) const;

  /// Never throws for per-question failures; they are recorded.
  AnswerRecord resolve(const std::string& question, std::stop_token stop = {}) const;
  /// Runs the code path for a known task (no embedding step).
  AnswerRecord resolve_task(const std::string& question, TaskType task, std::stop_token stop = {}) const;

  const EmbeddingIndex& index() const { return *deps_.index; }

 private:
  void run_plan(AnswerRecord& rec, TaskType task, std::stop_token stop) const;
  CodeResolverDeps deps_;
};

}  // namespace nba
