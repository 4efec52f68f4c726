#include "nba/agent/agent.hpp"

#include <regex>
#include <sstream>

#include "nba/code/extract.hpp"
#include "nba/common/text.hpp"
#include "nba/gateway/truncate.hpp"
#include "nba/ncbi/documents.hpp"

namespace nba {

using nlohmann::json;

std::string parse_answer_line(std::string_view text_in) {
  std::istringstream in{std::string(text_in)};
  std::string line, first, answer;
  bool found = false;
  while (std::getline(in, line)) {
    auto t = text::trim(line);
    if (t.empty()) continue;
    if (first.empty()) first = t;
    if (text::starts_with_ci(t, "answer:")) {
      answer = text::trim(t.substr(7));
      found = true;
    }
  }
  return found ? answer : first;
}

std::string normalize_parameter(const std::string& kind, std::string_view value) {
  const auto v = text::trim(value);
  if (kind == "dna") {
    std::string out;
    for (char c : v)
      if (std::isalpha(static_cast<unsigned char>(c))) out.push_back(static_cast<char>(std::toupper(c)));
    return out;
  }
  if (kind == "gene_symbol") return normalize_gene_symbol(v);
  if (kind == "rsid") {
    auto rs = find_rsid(v);
    return rs ? *rs : text::to_lower(normalize_gene_symbol(v));
  }
  if (kind == "ensembl_id") {
    auto id = find_ensembl_id(v);
    return id ? *id : text::to_upper(normalize_gene_symbol(v));
  }
  return text::collapse_whitespace(v);
}

Agent::Agent(AgentDeps deps) : deps_(std::move(deps)) {
  if (!deps_.plans || !deps_.gateway || !deps_.prompts || !deps_.examples || !deps_.clock)
    throw PreconditionError("agent needs plans, a gateway, prompts, classifier examples and a clock");
  deps_.chat.validate();
}

Agent::ModelReply Agent::call_model(const std::string& prompt, const std::map<std::string, std::string>& vars,
                                    const std::string& purpose) const {
  const auto messages = deps_.prompts->render(prompt, vars);
  auto r = deps_.gateway->chat_complete(deps_.chat, messages, purpose);
  return {std::move(r.text), r.usage};
}

namespace {

/// Runs `body` as one traced model interaction outside the executor.
template <typename F>
auto traced(StepTrace* trace, const Clock& clock, const std::string& id, const std::string& target, F&& body) {
  StepTrace local;
  StepTrace& t = trace ? *trace : local;
  t.step_id = id;
  t.kind = StepKind::ModelCall;
  t.target = target;
  t.started_at = clock.wall_ms();
  try {
    auto out = body(t);
    t.ended_at = std::max(clock.wall_ms(), t.started_at);
    return out;
  } catch (const std::exception& e) {
    t.error = error_cause_name(e) + ": " + e.what();
    t.parsed_output.clear();
    t.ended_at = std::max(clock.wall_ms(), t.started_at);
    throw;
  }
}

/// Rethrows a model step's failure with the reply it got, so the executor's
/// trace still shows what the model said and what it cost.
template <typename F>
StepResult keeping_reply(const StepContext& ctx, StepTrace& t, F&& body) {
  try {
    return body();
  } catch (const StepFailed&) {
    throw;
  } catch (const std::exception& e) {
    StepFailed failed(ctx.step.id, error_cause_name(e), e.what());
    failed.raw_output = t.raw_output;
    failed.usage = t.usage;
    throw failed;
  }
}

std::string task_listing() {
  std::string s;
  for (auto t : kAllTasks) {
    s += "- ";
    s += to_string(t);
    s += '\n';
  }
  return s;
}

}  // namespace

TaskType Agent::classify_task(const std::string& question, StepTrace* trace) const {
  if (text::trim(question).empty()) throw PreconditionError("question is empty");
  return traced(trace, *deps_.clock, "classify_task", "classify", [&](StepTrace& t) {
    std::string shots;
    for (const auto& e : deps_.examples->pick(deps_.examples_per_task))
      shots += "Question: " + e.question + "\nTask: " + std::string(to_string(e.task)) + "\n\n";
    t.rendered_inputs = {{"question", question}};
    auto reply = call_model("classify", {{"tasks", task_listing()}, {"examples", shots}, {"question", question}},
                            "classify");
    t.raw_output = reply.text;
    t.usage = reply.usage;
    auto label = parse_answer_line(reply.text);
    if (text::starts_with_ci(label, "task:")) label = text::trim(label.substr(5));
    auto task = task_from_string(label);
    if (!task) {
      // Tolerate chatter around the label: first task name mentioned wins.
      std::size_t best = std::string::npos;
      for (auto cand : kAllTasks) {
        const auto pos = text::to_lower(reply.text).find(text::to_lower(to_string(cand)));
        if (pos < best) {
          best = pos;
          task = cand;
        }
      }
    }
    const TaskType out = task.value_or(TaskType::Unknown);
    t.parsed_output = std::string(to_string(out));
    return out;
  });
}

std::map<std::string, std::string> Agent::infer_parameters(const std::string& question, const PlanStep& step,
                                                           StepTrace* trace) const {
  if (step.params.empty()) throw PreconditionError("step '" + step.id + "' declares no parameters to infer");
  return traced(trace, *deps_.clock, step.id, step.target, [&](StepTrace& t) {
    std::string listing;
    for (const auto& p : step.params)
      listing += "- " + p.name + " (" + p.kind + (p.required ? ", required" : ", optional") + "): " + p.description +
                 "\n";
    t.rendered_inputs = {{"question", question}};
    auto reply = call_model("infer_parameters", {{"question", question}, {"params", listing}}, "infer_parameters");
    t.raw_output = reply.text;
    t.usage = reply.usage;

    std::map<std::string, std::string> raw;
    const auto open = reply.text.find('{');
    const auto close = reply.text.rfind('}');
    bool parsed = false;
    if (open != std::string::npos && close != std::string::npos && close > open) {
      try {
        const json j = json::parse(reply.text.substr(open, close - open + 1));
        for (const auto& [k, v] : j.items())
          if (v.is_string()) raw[k] = v.get<std::string>();
        parsed = true;
      } catch (const json::exception&) {
      }
    }
    if (!parsed) {
      std::istringstream in(reply.text);
      std::string line;
      while (std::getline(in, line))
        if (auto c = line.find(':'); c != std::string::npos)
          raw[text::to_lower(text::trim(line.substr(0, c)))] = text::trim(line.substr(c + 1));
    }

    std::map<std::string, std::string> out;
    std::string summary;
    for (const auto& p : step.params) {
      auto v = raw.contains(p.name) ? normalize_parameter(p.kind, raw[p.name]) : std::string{};
      if (text::iequals(v, "none") || text::iequals(v, "null")) v.clear();
      if (v.empty() && p.required) throw MissingParameter("model returned no value for '" + p.name + "'");
      out[p.name] = v;
      if (!summary.empty()) summary += "; ";
      summary += p.name + "=" + v;
    }
    t.parsed_output = summary;
    return out;
  });
}

std::string Agent::parse_document(const std::string& doc, const std::string& goal, const std::string& subject,
                                  StepTrace* trace) const {
  if (doc.empty()) throw PreconditionError("document is empty");
  return traced(trace, *deps_.clock, "parse_document", "parse_document", [&](StepTrace& t) {
    const auto shown = truncate_document(doc, deps_.prompts->document_budget());
    t.rendered_inputs = {{"goal", goal}, {"subject", subject}, {"document", shown}};
    auto reply = call_model("parse_document",
                            {{"goal_name", goal},
                             {"goal", deps_.prompts->goal(goal)},
                             {"subject", subject.empty() ? "(none)" : subject},
                             {"document", shown}},
                            "parse_document");
    t.raw_output = reply.text;
    t.usage = reply.usage;
    auto value = parse_answer_line(reply.text);
    if (value.empty() || text::iequals(value, "none") || text::iequals(value, "n/a"))
      throw ExtractionEmpty("specialist found no " + goal + (subject.empty() ? "" : " for " + subject));
    if (deps_.validate) {
      try {
        auto det = extract_field(goal, doc, subject);
        if (!det)
          t.note = "validator: deterministic parser found nothing";
        else if (text::iequals(text::trim(*det), value))
          t.note = "validator: agrees";
        else
          t.note = "validator: deterministic parser says '" + *det + "'";
      } catch (const std::exception& e) {
        t.note = std::string("validator: n/a (") + e.what() + ")";
      }
    }
    t.parsed_output = value;
    return value;
  });
}

std::string Agent::aggregate_answer(const std::vector<StepTrace>& traces, const std::string& question, TaskType task,
                                    const std::string& value, StepTrace* trace) const {
  if (traces.empty()) throw PreconditionError("aggregation needs at least one trace");
  if (std::none_of(traces.begin(), traces.end(), [](const StepTrace& t) { return t.ok(); }))
    throw PreconditionError("aggregation needs a successful trace");
  return traced(trace, *deps_.clock, "aggregate_answer", "aggregate", [&](StepTrace& t) {
    const auto& format = deps_.prompts->answer_format(answer_kind(task));
    t.rendered_inputs = {{"question", question}, {"value", value}};
    auto reply = call_model("aggregate", {{"question", question}, {"value", value}, {"format", format}}, "aggregate");
    t.raw_output = reply.text;
    t.usage = reply.usage;
    auto answer = parse_answer_line(reply.text);
    if (answer.empty()) throw AggregationFailed("generalist returned no answer");
    t.parsed_output = answer;
    return answer;
  });
}

HandlerTable Agent::model_handlers() const {
  HandlerTable h;
  h.set("infer_parameters", [this](const StepContext& ctx) {
    StepTrace t;
    return keeping_reply(ctx, t, [&] {
      const auto values = infer_parameters(ctx.question, ctx.step, &t);
      StepResult r;
      r.value.fields = values;
      r.value.text = t.parsed_output;
      r.raw_output = t.raw_output;
      r.usage = t.usage;
      return r;
    });
  });
  h.set("parse_document", [this](const StepContext& ctx) {
    StepTrace t;
    return keeping_reply(ctx, t, [&] {
      const auto subject = ctx.inputs.contains("subject") ? ctx.inputs.at("subject") : std::string{};
      const auto value = parse_document(ctx.inputs.at("document"), ctx.inputs.at("goal"), subject, &t);
      StepResult r;
      r.value.text = value;
      r.raw_output = t.raw_output;
      r.usage = t.usage;
      r.note = t.note;
      return r;
    });
  });
  return h;
}

void Agent::run_direct(AnswerRecord& rec) const {
  StepTrace t;
  try {
    traced(&t, *deps_.clock, "direct_answer", "direct", [&](StepTrace& tr) {
      tr.rendered_inputs = {{"question", rec.question}};
      auto reply = call_model("direct", {{"question", rec.question}}, "direct");
      tr.raw_output = reply.text;
      tr.usage = reply.usage;
      tr.parsed_output = parse_answer_line(reply.text);
      if (tr.parsed_output.empty()) throw AggregationFailed("model returned no answer");
      return 0;
    });
    rec.final_answer = t.parsed_output;
    rec.canonical_answer = normalize_answer(rec.task, rec.final_answer);
  } catch (const std::exception& e) {
    rec.error = e.what();
    rec.error_cause = error_cause_name(e);
  }
  rec.traces.push_back(std::move(t));
}

void Agent::run_agentic(AnswerRecord& rec, std::stop_token stop) const {
  StepTrace ct;
  TaskType task;
  try {
    task = classify_task(rec.question, &ct);
    rec.traces.push_back(std::move(ct));
  } catch (const std::exception& e) {
    rec.traces.push_back(std::move(ct));
    rec.error = e.what();
    rec.error_cause = error_cause_name(e);
    return;
  }

  if (task == TaskType::Unknown) {
    if (deps_.code) {
      auto m = deps_.code->match(rec.question);
      rec.traces.push_back(std::move(m.trace));
      if (m.match) {
        task = m.match->task;
        rec.warnings.push_back("classifier answered Unknown; task taken from the stored-question match");
      }
    }
    if (task == TaskType::Unknown) {
      rec.warnings.push_back("task could not be determined; answered by direct prompting");
      run_direct(rec);
      return;
    }
  }
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
  handlers.merge(model_handlers());
  // The classification call already counts against the budget.
  const auto spent = rec.traces.empty() ? 0 : rec.traces.back().ended_at - rec.traces.front().started_at;
  ExecOptions opts{deps_.clock, Millis(std::max<std::int64_t>(1, deps_.budget.count() - spent)), deps_.log, stop, {}};
  auto result = execute_plan(*plan, rec.question, handlers, opts);
  rec.excluded_wait_ms += result.excluded_wait_ms;
  for (auto& t : result.traces) rec.traces.push_back(std::move(t));
  if (!result.ok()) {
    rec.error = result.failure->what();
    rec.error_cause = result.failure->cause();
    return;
  }
  const auto value = result.resolve(plan->answer);
  rec.canonical_answer = normalize_answer(task, value);

  StepTrace at;
  try {
    rec.final_answer = aggregate_answer(rec.traces, rec.question, task, rec.canonical_answer, &at);
  } catch (const std::exception& e) {
    rec.error = e.what();
    rec.error_cause = error_cause_name(e);
  }
  rec.traces.push_back(std::move(at));
}

AnswerRecord Agent::answer_question(const std::string& question, Method method, std::stop_token stop) const {
  AnswerRecord rec;
  rec.question = question;
  rec.method = method;
  rec.model = deps_.chat.name;
  const auto t0 = deps_.clock->monotonic_ms();
  try {
    if (text::trim(question).empty()) throw PreconditionError("question is empty");
    switch (method) {
      case Method::agentic:
        run_agentic(rec, stop);
        break;
      case Method::direct:
        run_direct(rec);
        break;
      case Method::genegpt:
        run_genegpt(rec);
        break;
      case Method::code:
        if (!deps_.code) throw ConfigError("method=code needs an embedding index and endpoint");
        rec = deps_.code->resolve(question, stop);
        break;
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
    rec.error_cause = error_cause_name(e);
  }
  rec.recompute_usage();
  rec.elapsed_ms = deps_.clock->monotonic_ms() - t0;
  if (deps_.log)
    deps_.log->write({{"event", "question"},
                      {"question", rec.question},
                      {"method", to_string(rec.method)},
                      {"model", rec.model},
                      {"task", to_string(rec.task)},
                      {"canonical_answer", rec.canonical_answer},
                      {"error", rec.error ? json(*rec.error) : json(nullptr)},
                      {"elapsed_ms", rec.elapsed_ms},
                      {"excluded_wait_ms", rec.excluded_wait_ms},
                      {"usage", to_json(rec.total_usage)},
                      {"rss_kb", resident_memory_kb()}});
  return rec;
}

}  // namespace nba
