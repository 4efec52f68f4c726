// GeneGPT-style baseline: one monolithic prompt, the model writes
// "[URL]->" when it wants a call made, and the result is spliced into the
// transcript before the next turn.
#include <regex>

#include "nba/agent/agent.hpp"
#include "nba/common/text.hpp"
#include "nba/gateway/truncate.hpp"

namespace nba {

namespace {

constexpr std::size_t kCallResultBudget = 3000;

}  // namespace

std::string Agent::fetch_url(const std::string& url, StepTrace& trace) const {
  if (!deps_.toolbox) throw ConfigError("genegpt method needs the NCBI toolbox");
  const auto parsed = parse_url(url);
  const auto qpos = parsed.path_and_query.find('?');
  const auto path = parsed.path_and_query.substr(0, qpos);
  std::map<std::string, std::string> q;
  if (qpos != std::string::npos)
    for (auto& [k, v] : parse_query(std::string_view(parsed.path_and_query).substr(qpos + 1)))
      if (!is_credential_param(k)) q[text::to_lower(k)] = v;
  trace.rendered_inputs = {{"url", url}};

  for (auto util : {EutilsUtil::esearch, EutilsUtil::esummary, EutilsUtil::efetch}) {
    if (!path.ends_with("/" + std::string(to_string(util)) + ".fcgi")) continue;
    EutilsRequest req{util, q["db"], {}};
    for (const auto& [k, v] : q)
      if (k != "db") req.params[k] = v;
    return deps_.toolbox->eutils_call(req).body;
  }
  if (path.ends_with("Blast.cgi")) {
    const auto cmd = text::to_lower(q["cmd"]);
    BlastJob job;
    job.program = text::iequals(q["megablast"], "on") ? BlastProgram::megablast : BlastProgram::blastn;
    job.database = q["database"];
    if (cmd == "put") {
      job.sequence = q["query"];
      job = deps_.toolbox->blast_submit(std::move(job));
      return "RID = " + job.rid + "\nRTOE = " + std::to_string(job.rtoe_s);
    }
    if (cmd == "get") {
      job.rid = q["rid"];
      job.status = BlastStatus::Waiting;
      job = deps_.toolbox->blast_poll(std::move(job));
      return job.report;
    }
  }
  throw PreconditionError("URL is not an E-utils or BLAST call: " + url);
}

void Agent::run_genegpt(AnswerRecord& rec) const {
  static const std::regex call_re(R"(\[(https?://[^\]\s]+)\]->)");
  std::string transcript;
  for (int turn = 0; turn <= deps_.genegpt_max_calls; ++turn) {
    StepTrace t;
    t.step_id = "genegpt_turn_" + std::to_string(turn);
    t.kind = StepKind::ModelCall;
    t.target = "genegpt";
    t.started_at = deps_.clock->wall_ms();
    std::string reply;
    try {
      t.rendered_inputs = {{"question", rec.question}};
      auto r = call_model("genegpt", {{"question", rec.question}, {"transcript", transcript}}, "genegpt");
      reply = r.text;
      t.raw_output = r.text;
      t.usage = r.usage;
      t.parsed_output = r.text.empty() ? "(empty)" : text::trim(r.text).substr(0, 200);
      if (t.parsed_output.empty()) t.parsed_output = "(blank)";
    } catch (const std::exception& e) {
      t.error = e.what();
      t.ended_at = std::max(deps_.clock->wall_ms(), t.started_at);
      rec.traces.push_back(std::move(t));
      rec.error = e.what();
      rec.error_cause = error_cause_name(e);
      return;
    }
    t.ended_at = std::max(deps_.clock->wall_ms(), t.started_at);
    rec.traces.push_back(std::move(t));

    std::smatch m;
    if (turn < deps_.genegpt_max_calls && std::regex_search(reply, m, call_re)) {
      const std::string url = m[1].str();
      transcript += reply.substr(0, static_cast<std::size_t>(m.position(0) + m.length(0)));
      StepTrace call;
      call.step_id = "genegpt_call_" + std::to_string(turn);
      call.kind = StepKind::ToolCall;
      call.target = "url";
      call.started_at = deps_.clock->wall_ms();
      std::string result;
      try {
        result = fetch_url(url, call);
        call.raw_output = result;
        call.parsed_output = result.empty() ? "(empty)" : "ok";
      } catch (const std::exception& e) {
        call.error = e.what();
        result = std::string("error: ") + e.what();
      }
      call.ended_at = std::max(deps_.clock->wall_ms(), call.started_at);
      rec.traces.push_back(std::move(call));
      transcript += "[" + truncate_document(result.empty() ? "(empty)" : result, kCallResultBudget) + "]\n";
      continue;
    }
    rec.final_answer = parse_answer_line(reply);
    if (rec.final_answer.empty()) {
      rec.error = "model returned no answer";
      rec.error_cause = "AggregationFailed";
      return;
    }
    rec.canonical_answer = normalize_answer(rec.task, rec.final_answer);
    return;
  }
}

}  // namespace nba
