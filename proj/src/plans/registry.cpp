#include "nba/plans/registry.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace nba {

using nlohmann::json;

void ToolRegistry::register_tool(ToolSignature signature) {
  if (signature.name.empty()) throw PreconditionError("tool name must not be empty");
  if (tools_.contains(signature.name)) throw DuplicateTool("tool already registered: " + signature.name);
  auto name = signature.name;
  tools_.emplace(std::move(name), std::move(signature));
}

const ToolSignature* ToolRegistry::find(std::string_view name) const {
  auto it = tools_.find(name);
  return it == tools_.end() ? nullptr : &it->second;
}

std::vector<std::string> ToolRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [k, _] : tools_) out.push_back(k);
  return out;
}

void register_builtin_tools(ToolRegistry& r) {
  r.register_tool({"eutils.esearch", StepKind::ToolCall,
                   {{"db", true}, {"term", true}, {"retmax", false}},
                   {"ids", "first_id", "count"}});
  r.register_tool({"eutils.esummary", StepKind::ToolCall, {{"db", true}, {"id", true}}, {}});
  r.register_tool({"eutils.efetch", StepKind::ToolCall,
                   {{"db", true}, {"id", true}, {"retmode", false}, {"rettype", false}}, {}});
  r.register_tool({"blast.submit", StepKind::ToolCall,
                   {{"program", true}, {"database", true}, {"sequence", true}},
                   {"rid", "rtoe"}});
  r.register_tool({"blast.poll", StepKind::ToolCall,
                   {{"rid", true}, {"program", true}, {"database", true}, {"sequence", true}},
                   {"status"}});
  r.register_tool({"blast.top_hit", StepKind::Transform, {{"report", true}},
                   {"chromosome", "start", "end", "organism"}});
  r.register_tool({"table.lookup", StepKind::Transform, {{"table", true}, {"key", true}}, {}});
  r.register_tool({"regex.capture", StepKind::Transform, {{"pattern", true}, {"text", true}}, {}});
  r.register_tool({"infer_parameters", StepKind::ModelCall, {{"question", true}}, {}, true});
  r.register_tool({"parse_document", StepKind::ModelCall,
                   {{"document", true}, {"goal", true}, {"subject", false}}, {}});
}

ToolRegistry builtin_tool_registry() {
  ToolRegistry r;
  register_builtin_tools(r);
  return r;
}

namespace {

struct Produced {
  const ToolSignature* signature;
  const PlanStep* step;
};

void check_reference(const std::string& ref, const std::map<std::string, Produced>& available,
                     const std::string& where) {
  if (ref == "question") return;
  auto [out, field] = split_reference(ref);
  auto it = available.find(out);
  if (it == available.end())
    throw BindingError(where + ": reference '" + ref + "' does not name the question or an earlier step output");
  if (field.empty()) return;
  const auto& sig = *it->second.signature;
  bool ok = false;
  if (sig.fields_from_params) {
    const auto& params = it->second.step->params;
    ok = std::any_of(params.begin(), params.end(), [&](const ParamSpec& p) { return p.name == field; });
  } else {
    ok = std::find(sig.output_fields.begin(), sig.output_fields.end(), field) != sig.output_fields.end();
  }
  if (!ok) throw BindingError(where + ": output '" + out + "' has no field '" + field + "'");
}

}  // namespace

void validate_plan(const Plan& plan, const ToolRegistry& tools) {
  const std::string plan_name(to_string(plan.task));
  if (plan.task == TaskType::Unknown) throw SchemaError("plan task must not be Unknown");
  if (plan.steps.empty()) throw SchemaError("plan " + plan_name + ": step list is empty");

  std::set<std::string> step_ids;
  std::map<std::string, Produced> available;
  for (const auto& step : plan.steps) {
    const std::string where = "plan " + plan_name + " step '" + step.id + "'";
    if (step.id.empty()) throw SchemaError(where + ": empty step id");
    if (!step_ids.insert(step.id).second) throw SchemaError(where + ": duplicate step id");
    if (step.output.empty() || step.output == "question" || step.output.find('.') != std::string::npos)
      throw SchemaError(where + ": invalid output identifier '" + step.output + "'");
    if (available.contains(step.output)) throw SchemaError(where + ": duplicate output '" + step.output + "'");

    const ToolSignature* sig = tools.find(step.target);
    if (!sig) throw UnknownTool(where + ": unregistered target '" + step.target + "'");
    if (sig->kind != step.kind)
      throw SchemaError(where + ": kind " + std::string(to_string(step.kind)) + " does not match target kind " +
                        std::string(to_string(sig->kind)));

    for (const auto& [name, required] : sig->inputs)
      if (required && !step.inputs.contains(name)) throw SchemaError(where + ": missing required input '" + name + "'");
    for (const auto& [name, binding] : step.inputs) {
      if (!sig->inputs.contains(name)) throw SchemaError(where + ": unknown input '" + name + "'");
      for (const auto& ref : binding.references()) check_reference(ref, available, where + " input '" + name + "'");
    }

    if (sig->fields_from_params) {
      if (step.params.empty()) throw SchemaError(where + ": parameter inference step declares no params");
      std::set<std::string> names;
      for (const auto& p : step.params) {
        if (p.name.empty() || !names.insert(p.name).second)
          throw SchemaError(where + ": empty or duplicate param name '" + p.name + "'");
        const auto& kinds = param_kinds();
        if (std::find(kinds.begin(), kinds.end(), p.kind) == kinds.end())
          throw SchemaError(where + ": unknown param kind '" + p.kind + "'");
      }
    } else if (!step.params.empty()) {
      throw SchemaError(where + ": only parameter inference steps take params");
    }

    available.emplace(step.output, Produced{sig, &step});
  }
  if (plan.answer.empty()) throw SchemaError("plan " + plan_name + ": empty answer binding");
  if (plan.answer == "question") throw BindingError("plan " + plan_name + ": answer must be a step output");
  check_reference(plan.answer, available, "plan " + plan_name + " answer");
}

std::vector<PlanDocument> read_plan_directory(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ConfigError("plan directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<PlanDocument> docs;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    docs.push_back({f.filename().string(), ss.str()});
  }
  return docs;
}

PlanRegistry PlanRegistry::load(std::span<const PlanDocument> docs, const ToolRegistry& tools) {
  PlanRegistry reg;
  for (const auto& doc : docs) {
    json j;
    try {
      j = json::parse(doc.text);
    } catch (const json::parse_error& e) {
      throw SchemaError(doc.origin + ": malformed JSON: " + e.what());
    }
    std::vector<json> plan_jsons;
    if (j.is_object() && j.contains("plans")) {
      if (!j.contains("schema_version") || j.at("schema_version") != kPlanSchemaVersion)
        throw SchemaError(doc.origin + ": bundle requires schema_version " + std::to_string(kPlanSchemaVersion));
      if (!j.at("plans").is_array()) throw SchemaError(doc.origin + ": 'plans' must be an array");
      for (const auto& p : j.at("plans")) plan_jsons.push_back(p);
    } else {
      plan_jsons.push_back(j);
    }
    for (const auto& pj : plan_jsons) {
      Plan plan = plan_from_json(pj, doc.origin);
      try {
        validate_plan(plan, tools);
      } catch (const UnknownTool& e) {
        throw UnknownTool(doc.origin + ": " + e.what());
      } catch (const BindingError& e) {
        throw BindingError(doc.origin + ": " + e.what());
      } catch (const SchemaError& e) {
        throw SchemaError(doc.origin + ": " + e.what());
      }
      if (reg.plans_.contains(plan.task))
        throw SchemaError(doc.origin + ": second plan for task " + std::string(to_string(plan.task)));
      reg.plans_.emplace(plan.task, std::move(plan));
    }
  }
  return reg;
}

PlanRegistry PlanRegistry::load_directory(const std::filesystem::path& dir, const ToolRegistry& tools) {
  auto docs = read_plan_directory(dir);
  return load(docs, tools);
}

const Plan& PlanRegistry::retrieve_plan(TaskType task) const {
  if (task == TaskType::Unknown) throw NoPlanForTask("no plan for task Unknown");
  auto it = plans_.find(task);
  if (it == plans_.end()) throw NoPlanForTask("no plan loaded for task " + std::string(to_string(task)));
  return it->second;
}

std::vector<TaskType> PlanRegistry::tasks() const {
  std::vector<TaskType> out;
  for (const auto& [t, _] : plans_) out.push_back(t);
  return out;
}

}  // namespace nba
