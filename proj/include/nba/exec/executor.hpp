#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stop_token>
#include <string>
#include <vector>

#include "nba/common/clock.hpp"
#include "nba/common/log.hpp"
#include "nba/exec/trace.hpp"
#include "nba/plans/plan.hpp"

namespace nba {

/// Output of a step: the text a bare reference sees plus named fields
/// for "out.field" references.
struct StepValue {
  std::string text;
  std::map<std::string, std::string> fields;
};

struct StepContext {
  const PlanStep& step;
  const std::map<std::string, std::string>& inputs;  // rendered
  const std::string& question;
};

struct StepResult {
  StepValue value;
  std::string raw_output;
  UsageMetrics usage;
  /// Kind recorded in the trace; defaults to the plan step's kind. Code
  /// mode runs model steps through deterministic substitutes and labels
  /// them Transform.
  std::optional<StepKind> trace_kind;
  std::string note;
  /// Time spent waiting on BLAST, not charged to the question budget.
  std::int64_t excluded_wait_ms = 0;
};

using StepHandler = std::function<StepResult(const StepContext&)>;

/// Target name -> implementation.
class HandlerTable {
 public:
  void set(std::string target, StepHandler handler) { handlers_[std::move(target)] = std::move(handler); }
  const StepHandler* find(const std::string& target) const {
    auto it = handlers_.find(target);
    return it == handlers_.end() ? nullptr : &it->second;
  }
  /// Entries of `other` replace same-named ones here.
  void merge(const HandlerTable& other) {
    for (const auto& [k, v] : other.handlers_) handlers_[k] = v;
  }

 private:
  std::map<std::string, StepHandler> handlers_;
};

/// A step aborted the plan. `cause` names the underlying failure
/// ("Timeout", "EmptyResult", ...) for per-cause reporting.
class StepFailed : public Error {
 public:
  StepFailed(std::string step_id, std::string cause, const std::string& what)
      : Error(what), step_id_(std::move(step_id)), cause_(std::move(cause)) {}
  const std::string& step_id() const { return step_id_; }
  const std::string& cause() const { return cause_; }

  // What the step saw before failing (a model reply that did not parse),
  // kept for the trace.
  std::string raw_output;
  UsageMetrics usage;

 private:
  std::string step_id_;
  std::string cause_;
};

struct ExecOptions {
  std::shared_ptr<Clock> clock;
  Millis budget{120'000};  // per question, BLAST waits excluded
  std::shared_ptr<LogSink> log;
  std::stop_token stop;
  std::string question_id;  // labels log records
};

struct ExecutionResult {
  std::vector<StepTrace> traces;
  std::map<std::string, StepValue> outputs;
  std::optional<StepFailed> failure;
  std::int64_t excluded_wait_ms = 0;

  bool ok() const { return !failure.has_value(); }
  /// Value of a "out" / "out.field" reference. Throws BindingError.
  std::string resolve(const std::string& ref) const;
};

/// Name of the dynamic type of an exception derived from nba::Error,
/// demangled and without namespace ("EmptyResult").
std::string error_cause_name(const std::exception& e);

/// Runs the steps in order. A failing step is traced with its error and
/// ends the run; no later step is attempted. Never throws for step
/// failures (they land in `failure`); throws PreconditionError when a
/// target has no handler.
ExecutionResult execute_plan(const Plan& plan, const std::string& question, const HandlerTable& handlers,
                             const ExecOptions& options);

/// Renders a binding against the question and the values produced so far.
std::string render_binding(const Binding& b, const std::string& question,
                           const std::map<std::string, StepValue>& outputs);

}  // namespace nba
