#include "nba/exec/trace.hpp"

namespace nba {

using nlohmann::json;

json to_json(const StepTrace& t) {
  json j = {{"step_id", t.step_id},
            {"kind", to_string(t.kind)},
            {"target", t.target},
            {"rendered_inputs", t.rendered_inputs},
            {"raw_output", t.raw_output},
            {"parsed_output", t.parsed_output},
            {"usage", to_json(t.usage)},
            {"started_at", t.started_at},
            {"ended_at", t.ended_at},
            {"error", t.error ? json(*t.error) : json(nullptr)}};
  if (!t.note.empty()) j["note"] = t.note;
  return j;
}

StepTrace step_trace_from_json(const json& j) {
  StepTrace t;
  t.step_id = j.at("step_id").get<std::string>();
  const auto kind_name = j.at("kind").get<std::string>();
  auto kind = step_kind_from_string(kind_name);
  if (!kind && kind_name == "Embedding") kind = StepKind::Embedding;
  if (!kind) throw SchemaError("trace has unknown step kind " + j.at("kind").dump());
  t.kind = *kind;
  t.target = j.value("target", "");
  t.rendered_inputs = j.value("rendered_inputs", std::map<std::string, std::string>{});
  t.raw_output = j.value("raw_output", "");
  t.parsed_output = j.value("parsed_output", "");
  t.usage = usage_from_json(j.value("usage", json::object()));
  t.started_at = j.value("started_at", std::int64_t{0});
  t.ended_at = j.value("ended_at", std::int64_t{0});
  if (j.contains("error") && !j["error"].is_null()) t.error = j["error"].get<std::string>();
  t.note = j.value("note", "");
  return t;
}

UsageMetrics sum_usage(const std::vector<StepTrace>& traces) {
  UsageMetrics total;
  for (const auto& t : traces) total += t.usage;
  return total;
}

}  // namespace nba
