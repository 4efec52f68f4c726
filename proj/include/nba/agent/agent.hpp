#pragma once

#include <map>
#include <memory>
#include <stop_token>
#include <string>
#include <vector>

#include "nba/agent/prompts.hpp"
#include "nba/code/resolver.hpp"
#include "nba/exec/answer.hpp"
#include "nba/exec/errors.hpp"
#include "nba/exec/executor.hpp"
#include "nba/gateway/gateway.hpp"
#include "nba/ncbi/toolbox.hpp"
#include "nba/plans/registry.hpp"

namespace nba {

struct AgentDeps {
  std::shared_ptr<const PlanRegistry> plans;
  HandlerTable tools;
  std::shared_ptr<ModelGateway> gateway;
  ModelEndpoint chat;
  std::shared_ptr<const PromptSet> prompts;
  std::shared_ptr<const ClassifierExamples> examples;
  /// Serves method=code and the Unknown-classification fallback. Optional.
  std::shared_ptr<const CodeResolver> code;
  /// URL calls of the GeneGPT-style runner. Optional.
  std::shared_ptr<NcbiToolbox> toolbox;
  std::shared_ptr<Clock> clock;
  std::shared_ptr<LogSink> log;
  Millis budget{120'000};
  std::size_t examples_per_task = 2;
  /// Compare model extractions with the deterministic parsers and note
  /// disagreements in the trace (annotation only).
  bool validate = true;
  int genegpt_max_calls = 8;
};

/// classify -> retrieve plan -> execute -> aggregate, with the model-driven
/// steps going through the gateway. Safe for concurrent use.
class Agent {
 public:
  explicit Agent(AgentDeps deps);

  /// Unparseable labels become Unknown; gateway errors propagate.
  TaskType classify_task(const std::string& question, StepTrace* trace = nullptr) const;
  /// Every required parameter of `step` filled and normalized by kind.
  /// Throws MissingParameter.
  std::map<std::string, std::string> infer_parameters(const std::string& question, const PlanStep& step,
                                                      StepTrace* trace = nullptr) const;
  /// Specialist extraction from a (truncated) document. Throws ExtractionEmpty.
  std::string parse_document(const std::string& doc, const std::string& goal, const std::string& subject,
                             StepTrace* trace = nullptr) const;
  /// Generalist rendering of the answer value. Throws AggregationFailed.
  std::string aggregate_answer(const std::vector<StepTrace>& traces, const std::string& question, TaskType task,
                               const std::string& value, StepTrace* trace = nullptr) const;

  /// Stage errors are captured in the record.
  AnswerRecord answer_question(const std::string& question, Method method, std::stop_token stop = {}) const;

  /// ModelCall handlers wired to the gateway, for the executor.
  HandlerTable model_handlers() const;

 private:
  struct ModelReply {
    std::string text;
    UsageMetrics usage;
  };
  ModelReply call_model(const std::string& prompt, const std::map<std::string, std::string>& vars,
                        const std::string& purpose) const;
  void run_agentic(AnswerRecord& rec, std::stop_token stop) const;
  void run_direct(AnswerRecord& rec) const;
  void run_genegpt(AnswerRecord& rec) const;
  std::string fetch_url(const std::string& url, StepTrace& trace) const;

  AgentDeps deps_;
};

/// Value after the last "Answer:" line, else the first non-empty line.
std::string parse_answer_line(std::string_view text);
/// Per-kind normalization of an inferred parameter.
std::string normalize_parameter(const std::string& kind, std::string_view value);

}  // namespace nba
