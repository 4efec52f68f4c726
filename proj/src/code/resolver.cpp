#include "nba/code/resolver.hpp"

#include <cstdio>

#include "nba/code/extract.hpp"
#include "nba/exec/errors.hpp"
#include "nba/ncbi/documents.hpp"

namespace nba {

HandlerTable make_code_model_handlers(TaskType task) {
  HandlerTable h;
  h.set("infer_parameters", [task](const StepContext& ctx) {
    const auto args = extract_arguments(ctx.question, task);
    StepResult r;
    std::string listing;
    for (const auto& p : ctx.step.params) {
      auto it = args.find(p.name);
      if (it == args.end() || it->second.empty()) {
        if (p.required) throw MissingParameter("no value for required parameter '" + p.name + "'");
        r.value.fields[p.name] = "";
        continue;
      }
      r.value.fields[p.name] = it->second;
      if (!listing.empty()) listing += "; ";
      listing += p.name + "=" + it->second;
    }
    r.value.text = listing;
    r.raw_output = listing;
    r.trace_kind = StepKind::Transform;
    r.note = "pattern extraction";
    return r;
  });
  h.set("parse_document", [](const StepContext& ctx) {
    const auto& goal = ctx.inputs.at("goal");
    auto subject = ctx.inputs.contains("subject") ? ctx.inputs.at("subject") : std::string{};
    auto v = extract_field(goal, ctx.inputs.at("document"), subject);
    if (!v || v->empty()) throw ExtractionEmpty("document holds no " + goal + (subject.empty() ? "" : " for " + subject));
    StepResult r;
    r.value.text = *v;
    r.raw_output = *v;
    r.trace_kind = StepKind::Transform;
    r.note = "deterministic parser";
    return r;
  });
  return h;
}

CodeResolver::CodeResolver(CodeResolverDeps deps) : deps_(std::move(deps)) {
  if (!deps_.plans || !deps_.index || !deps_.gateway || !deps_.clock)
    throw PreconditionError("code resolver needs plans, an index, a gateway and a clock");
  deps_.index->validate();
}

CodeResolver::Match CodeResolver::match(const std::string& question) const {
  Match out;
  StepTrace& t = out.trace;
  t.step_id = "match_task";
  t.kind = StepKind::Embedding;
  t.target = "embed:" + deps_.embedding.name;
  t.rendered_inputs = {{"question", question}};
  t.started_at = deps_.clock->wall_ms();
  try {
    if (question.empty()) throw PreconditionError("question is empty");
    auto e = deps_.gateway->embed(deps_.embedding, question);
    t.usage = e.usage;
    const auto best = best_match(e.vector, *deps_.index);
    out.match = match_task(e.vector, e.model_id, *deps_.index);
    char sim[32];
    std::snprintf(sim, sizeof sim, "%.6f", best.similarity);
    t.raw_output = std::string("similarity=") + sim + " matched=\"" + best.matched_question + "\"";
    t.note = e.from_cache ? "embedding cache" : "";
    if (!out.match)
      throw Unmatched("best similarity " + std::string(sim) + " is below the threshold " +
                      std::to_string(deps_.index->threshold));
    t.parsed_output = std::string(to_string(out.match->task));
  } catch (const std::exception& e) {
    t.error = std::string(error_cause_name(e)) + ": " + e.what();
    t.parsed_output.clear();
  }
  t.ended_at = std::max(deps_.clock->wall_ms(), t.started_at);
  return out;
}

void CodeResolver::run_plan(AnswerRecord& rec, TaskType task, std::stop_token stop) const {
  rec.task = task;
  const Plan* plan = nullptr;
  try {
    plan = &deps_.plans->retrieve_plan(task);
  } catch (const Error& e) {
    rec.error = e.what();
    rec.error_cause = error_cause_name(e);
    return;
  }
  HandlerTable handlers = deps_.tools;
  handlers.merge(make_code_model_handlers(task));
  ExecOptions opts{deps_.clock, deps_.budget, deps_.log, stop, {}};
  auto result = execute_plan(*plan, rec.question, handlers, opts);
  rec.excluded_wait_ms += result.excluded_wait_ms;
  for (auto& t : result.traces) rec.traces.push_back(std::move(t));
  if (!result.ok()) {
    rec.error = result.failure->what();
    rec.error_cause = result.failure->cause();
    return;
  }
  const auto raw = result.resolve(plan->answer);
  rec.final_answer = raw;
  rec.canonical_answer = normalize_answer(task, raw);
}

AnswerRecord CodeResolver::resolve_task(const std::string& question, TaskType task, std::stop_token stop) const {
  AnswerRecord rec;
  rec.question = question;
  rec.method = Method::code;
  rec.model = deps_.embedding.name;
  const auto t0 = deps_.clock->monotonic_ms();
  run_plan(rec, task, stop);
  rec.recompute_usage();
  rec.elapsed_ms = deps_.clock->monotonic_ms() - t0;
  return rec;
}

AnswerRecord CodeResolver::resolve(const std::string& question, std::stop_token stop) const {
  AnswerRecord rec;
  rec.question = question;
  rec.method = Method::code;
  rec.model = deps_.embedding.name;
  const auto t0 = deps_.clock->monotonic_ms();
  auto m = match(question);
  const bool matched = m.match.has_value();
  const auto trace_error = m.trace.error;
  rec.traces.push_back(std::move(m.trace));
  if (!matched) {
    rec.error = trace_error.value_or("no match");
    rec.error_cause = rec.error->rfind("Unmatched", 0) == 0 ? "Unmatched" : rec.error->substr(0, rec.error->find(':'));
  } else {
    run_plan(rec, m.match->task, stop);
  }
  rec.recompute_usage();
  rec.elapsed_ms = deps_.clock->monotonic_ms() - t0;
  return rec;
}

}  // namespace nba
