#include "nba/plans/plan.hpp"

#include <algorithm>
#include <set>

namespace nba {

using nlohmann::json;

std::string_view to_string(StepKind k) {
  switch (k) {
    case StepKind::ToolCall: return "ToolCall";
    case StepKind::ModelCall: return "ModelCall";
    case StepKind::Transform: return "Transform";
    case StepKind::Embedding: return "Embedding";
  }
  return "?";
}

std::optional<StepKind> step_kind_from_string(std::string_view s) {
  if (s == "ToolCall") return StepKind::ToolCall;
  if (s == "ModelCall") return StepKind::ModelCall;
  if (s == "Transform") return StepKind::Transform;
  return std::nullopt;  // Embedding is a trace-only kind
}

std::pair<std::string, std::string> split_reference(std::string_view ref) {
  auto dot = ref.find('.');
  if (dot == std::string_view::npos) return {std::string(ref), {}};
  return {std::string(ref.substr(0, dot)), std::string(ref.substr(dot + 1))};
}

std::vector<std::string> template_references(std::string_view tmpl) {
  std::vector<std::string> refs;
  std::size_t pos = 0;
  while ((pos = tmpl.find('{', pos)) != std::string_view::npos) {
    auto close = tmpl.find('}', pos + 1);
    if (close == std::string_view::npos) break;
    refs.emplace_back(tmpl.substr(pos + 1, close - pos - 1));
    pos = close + 1;
  }
  return refs;
}

std::vector<std::string> Binding::references() const {
  switch (kind) {
    case Kind::Literal: return {};
    case Kind::Question: return {"question"};
    case Kind::Ref: return {value};
    case Kind::Template: return template_references(value);
  }
  return {};
}

const std::vector<std::string>& param_kinds() {
  static const std::vector<std::string> kinds = {"gene_symbol", "ensembl_id", "rsid", "dna", "text"};
  return kinds;
}

namespace {

json binding_to_json(const Binding& b) {
  switch (b.kind) {
    case Binding::Kind::Literal: return {{"literal", b.value}};
    case Binding::Kind::Question: return {{"question", true}};
    case Binding::Kind::Ref: return {{"ref", b.value}};
    case Binding::Kind::Template: return {{"template", b.value}};
  }
  return {};
}

[[noreturn]] void schema_fail(const std::string& origin, const std::string& what) {
  throw SchemaError(origin + ": " + what);
}

void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& origin,
                         const std::string& where) {
  for (const auto& [k, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      schema_fail(origin, where + ": unknown key '" + k + "'");
  }
}

std::string require_string(const json& j, const char* key, const std::string& origin, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_string()) schema_fail(origin, where + ": '" + key + "' must be a string");
  return j.at(key).get<std::string>();
}

Binding binding_from_json(const json& j, const std::string& origin, const std::string& where) {
  if (!j.is_object() || j.size() != 1) schema_fail(origin, where + ": binding must be an object with one key");
  const auto& [key, val] = *j.items().begin();
  if (key == "question") {
    if (!val.is_boolean() || !val.get<bool>()) schema_fail(origin, where + ": 'question' binding must be true");
    return Binding::question();
  }
  if (!val.is_string()) schema_fail(origin, where + ": binding value must be a string");
  if (key == "literal") return Binding::literal(val.get<std::string>());
  if (key == "ref") return Binding::ref(val.get<std::string>());
  if (key == "template") return Binding::templated(val.get<std::string>());
  schema_fail(origin, where + ": unknown binding kind '" + key + "'");
}

}  // namespace

json plan_to_json(const Plan& plan) {
  json steps = json::array();
  for (const auto& s : plan.steps) {
    json inputs = json::object();
    for (const auto& [name, b] : s.inputs) inputs[name] = binding_to_json(b);
    json step = {{"id", s.id}, {"kind", std::string(to_string(s.kind))}, {"target", s.target},
                 {"inputs", inputs}, {"output", s.output}};
    if (!s.params.empty()) {
      json params = json::array();
      for (const auto& p : s.params)
        params.push_back({{"name", p.name}, {"kind", p.kind}, {"required", p.required}, {"description", p.description}});
      step["params"] = params;
    }
    steps.push_back(std::move(step));
  }
  json j = {{"schema_version", kPlanSchemaVersion},
            {"task", std::string(to_string(plan.task))},
            {"steps", steps},
            {"answer", plan.answer}};
  if (!plan.description.empty()) j["description"] = plan.description;
  return j;
}

Plan plan_from_json(const json& j, const std::string& origin) {
  if (!j.is_object()) schema_fail(origin, "plan must be a JSON object");
  reject_unknown_keys(j, {"schema_version", "task", "description", "steps", "answer"}, origin, "plan");
  if (!j.contains("schema_version") || !j.at("schema_version").is_number_integer())
    schema_fail(origin, "plan: 'schema_version' is required");
  if (j.at("schema_version").get<int>() != kPlanSchemaVersion)
    schema_fail(origin, "plan: unsupported schema_version " + j.at("schema_version").dump());

  Plan plan;
  const std::string task_name = require_string(j, "task", origin, "plan");
  auto task = task_from_string(task_name);
  if (!task || *task == TaskType::Unknown) schema_fail(origin, "plan: unknown task '" + task_name + "'");
  plan.task = *task;
  if (j.contains("description")) plan.description = require_string(j, "description", origin, "plan");
  plan.answer = require_string(j, "answer", origin, "plan");

  if (!j.contains("steps") || !j.at("steps").is_array()) schema_fail(origin, "plan: 'steps' must be an array");
  for (const auto& js : j.at("steps")) {
    if (!js.is_object()) schema_fail(origin, "step must be an object");
    reject_unknown_keys(js, {"id", "kind", "target", "inputs", "params", "output"}, origin, "step");
    PlanStep step;
    step.id = require_string(js, "id", origin, "step");
    const std::string where = "step '" + step.id + "'";
    const std::string kind = require_string(js, "kind", origin, where);
    auto k = step_kind_from_string(kind);
    if (!k) schema_fail(origin, where + ": unknown kind '" + kind + "'");
    step.kind = *k;
    step.target = require_string(js, "target", origin, where);
    step.output = require_string(js, "output", origin, where);
    if (js.contains("inputs")) {
      if (!js.at("inputs").is_object()) schema_fail(origin, where + ": 'inputs' must be an object");
      for (const auto& [name, jb] : js.at("inputs").items())
        step.inputs.emplace(name, binding_from_json(jb, origin, where + " input '" + name + "'"));
    }
    if (js.contains("params")) {
      if (!js.at("params").is_array()) schema_fail(origin, where + ": 'params' must be an array");
      for (const auto& jp : js.at("params")) {
        if (!jp.is_object()) schema_fail(origin, where + ": param must be an object");
        reject_unknown_keys(jp, {"name", "kind", "required", "description"}, origin, where + " param");
        ParamSpec p;
        p.name = require_string(jp, "name", origin, where + " param");
        p.kind = require_string(jp, "kind", origin, where + " param");
        if (jp.contains("required")) {
          if (!jp.at("required").is_boolean()) schema_fail(origin, where + ": 'required' must be boolean");
          p.required = jp.at("required").get<bool>();
        }
        if (jp.contains("description")) p.description = require_string(jp, "description", origin, where);
        step.params.push_back(std::move(p));
      }
    }
    plan.steps.push_back(std::move(step));
  }
  return plan;
}

}  // namespace nba
