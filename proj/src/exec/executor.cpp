#include "nba/exec/executor.hpp"

#include <cxxabi.h>

#include <typeinfo>

#include "nba/common/text.hpp"

namespace nba {

namespace {

std::string resolve_ref(const std::string& ref, const std::string& question,
                        const std::map<std::string, StepValue>& outputs) {
  if (ref == "question") return question;
  auto [out, field] = split_reference(ref);
  auto it = outputs.find(out);
  if (it == outputs.end()) throw BindingError("reference '" + ref + "' has no value yet");
  if (field.empty()) return it->second.text;
  auto f = it->second.fields.find(field);
  if (f == it->second.fields.end()) throw BindingError("output '" + out + "' produced no field '" + field + "'");
  return f->second;
}

}  // namespace

std::string render_binding(const Binding& b, const std::string& question,
                           const std::map<std::string, StepValue>& outputs) {
  switch (b.kind) {
    case Binding::Kind::Literal:
      return b.value;
    case Binding::Kind::Question:
      return question;
    case Binding::Kind::Ref:
      return resolve_ref(b.value, question, outputs);
    case Binding::Kind::Template: {
      std::string out;
      std::size_t i = 0;
      while (i < b.value.size()) {
        const auto open = b.value.find('{', i);
        if (open == std::string::npos) break;
        const auto close = b.value.find('}', open);
        if (close == std::string::npos) break;
        out.append(b.value, i, open - i);
        out += resolve_ref(b.value.substr(open + 1, close - open - 1), question, outputs);
        i = close + 1;
      }
      out.append(b.value, std::min(i, b.value.size()));
      return out;
    }
  }
  return {};
}

std::string ExecutionResult::resolve(const std::string& ref) const {
  static const std::string no_question;
  return resolve_ref(ref, no_question, outputs);
}

std::string error_cause_name(const std::exception& e) {
  int status = 0;
  const char* mangled = typeid(e).name();
  char* demangled = abi::__cxa_demangle(mangled, nullptr, nullptr, &status);
  std::string name = (status == 0 && demangled) ? demangled : mangled;
  std::free(demangled);
  if (auto pos = name.rfind("::"); pos != std::string::npos) name = name.substr(pos + 2);
  return name;
}

ExecutionResult execute_plan(const Plan& plan, const std::string& question, const HandlerTable& handlers,
                             const ExecOptions& options) {
  if (!options.clock) throw PreconditionError("execute_plan needs a clock");
  for (const auto& step : plan.steps)
    if (!handlers.find(step.target))
      throw PreconditionError("no implementation registered for step target '" + step.target + "'");

  ExecutionResult result;
  const auto t0 = options.clock->monotonic_ms();
  for (const auto& step : plan.steps) {
    StepTrace trace;
    trace.step_id = step.id;
    trace.kind = step.kind;
    trace.target = step.target;
    trace.started_at = options.clock->wall_ms();
    const auto m0 = options.clock->monotonic_ms();

    std::string cause;
    try {
      if (options.stop.stop_requested()) throw StepFailed(step.id, "Cancelled", "run cancelled");
      for (const auto& [name, binding] : step.inputs)
        trace.rendered_inputs[name] = render_binding(binding, question, result.outputs);
      StepResult r = (*handlers.find(step.target))(StepContext{step, trace.rendered_inputs, question});
      if (r.value.text.empty()) throw Error("step produced an empty value");
      if (r.trace_kind) trace.kind = *r.trace_kind;
      trace.raw_output = std::move(r.raw_output);
      trace.parsed_output = r.value.text;
      trace.usage = r.usage;
      trace.note = std::move(r.note);
      result.excluded_wait_ms += r.excluded_wait_ms;
      result.outputs[step.output] = std::move(r.value);
    } catch (const StepFailed& e) {
      trace.error = e.what();
      cause = e.cause();
      trace.raw_output = e.raw_output;
      trace.usage = e.usage;
    } catch (const std::exception& e) {
      trace.error = e.what();
      cause = error_cause_name(e);
    }

    const auto now = options.clock->monotonic_ms();
    if (!trace.error && now - t0 - result.excluded_wait_ms > options.budget.count()) {
      trace.error = "question budget of " + std::to_string(options.budget.count()) + " ms exceeded";
      cause = "Timeout";
    }
    trace.ended_at = std::max(options.clock->wall_ms(), trace.started_at);
    if (trace.usage.elapsed_ms == 0) trace.usage.elapsed_ms = now - m0;
    if (trace.error) {
      trace.parsed_output.clear();
      result.outputs.erase(step.output);
    }

    if (options.log)
      options.log->write({{"event", "step"},
                          {"question_id", options.question_id},
                          {"step_id", trace.step_id},
                          {"kind", to_string(trace.kind)},
                          {"target", trace.target},
                          {"elapsed_ms", trace.usage.elapsed_ms},
                          {"usage", to_json(trace.usage)},
                          {"rss_kb", resident_memory_kb()},
                          {"error", trace.error ? nlohmann::json(*trace.error) : nlohmann::json(nullptr)}});

    const bool failed = trace.error.has_value();
    const std::string message = failed ? *trace.error : std::string{};
    result.traces.push_back(std::move(trace));
    if (failed) {
      result.failure.emplace(step.id, cause, "step '" + step.id + "' failed (" + cause + "): " + message);
      break;
    }
  }
  return result;
}

}  // namespace nba
