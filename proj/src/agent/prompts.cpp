#include "nba/agent/prompts.hpp"

#include <fstream>

#include "nba/common/text.hpp"

namespace nba {

using nlohmann::json;

namespace {

json read_json(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ConfigError(std::string("cannot open ") + what + " " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

}  // namespace

std::string_view to_string(AnswerKind k) {
  switch (k) {
    case AnswerKind::Symbol:
      return "Symbol";
    case AnswerKind::Chromosome:
      return "Chromosome";
    case AnswerKind::GeneList:
      return "GeneList";
    case AnswerKind::Boolean:
      return "Boolean";
    case AnswerKind::Coordinates:
      return "Coordinates";
    case AnswerKind::Species:
      return "Species";
  }
  return "?";
}

PromptSet PromptSet::from_json(const json& j, const std::string& origin) {
  if (!j.is_object() || j.value("schema_version", 0) != 1) throw SchemaError(origin + ": unsupported prompt schema");
  PromptSet p;
  try {
    p.version_ = j.at("version").get<std::string>();
    p.document_budget_ = j.value("document_budget", std::size_t{6000});
    for (const auto& [name, pr] : j.at("prompts").items())
      p.prompts_[name] = Prompt{pr.at("system").get<std::string>(), pr.at("user").get<std::string>()};
    // Bind before iterating: items() on a temporary dangles.
    const json goals = j.value("goals", json::object());
    const json formats = j.value("answer_formats", json::object());
    for (const auto& [name, text] : goals.items()) p.goals_[name] = text.get<std::string>();
    for (const auto& [name, text] : formats.items())
      p.formats_[name] = text.get<std::string>();
  } catch (const json::exception& e) {
    throw SchemaError(origin + ": " + e.what());
  }
  for (const char* required : {"classify", "infer_parameters", "parse_document", "aggregate", "direct", "genegpt"})
    if (!p.prompts_.contains(required)) throw SchemaError(origin + ": prompt '" + required + "' is missing");
  return p;
}

PromptSet PromptSet::load(const std::filesystem::path& path) {
  return from_json(read_json(path, "prompt file"), path.string());
}

std::vector<ChatMessage> PromptSet::render(const std::string& name,
                                           const std::map<std::string, std::string>& vars) const {
  auto it = prompts_.find(name);
  if (it == prompts_.end()) throw ConfigError("no prompt named '" + name + "'");
  return {{"system", text::render_template(it->second.system, vars)},
          {"user", text::render_template(it->second.user, vars)}};
}

const std::string& PromptSet::goal(const std::string& name) const {
  auto it = goals_.find(name);
  if (it == goals_.end()) throw ConfigError("no description for extraction goal '" + name + "'");
  return it->second;
}

const std::string& PromptSet::answer_format(AnswerKind kind) const {
  auto it = formats_.find(std::string(to_string(kind)));
  if (it == formats_.end()) throw ConfigError("no answer format for " + std::string(to_string(kind)));
  return it->second;
}

std::vector<std::string> PromptSet::all_texts() const {
  std::vector<std::string> out;
  for (const auto& [_, p] : prompts_) {
    out.push_back(p.system);
    out.push_back(p.user);
  }
  for (const auto& [_, g] : goals_) out.push_back(g);
  for (const auto& [_, f] : formats_) out.push_back(f);
  return out;
}

ClassifierExamples ClassifierExamples::from_json(const json& j, const std::string& origin) {
  if (!j.is_object() || j.value("schema_version", 0) != 1 || !j.contains("examples"))
    throw SchemaError(origin + ": unsupported classifier example schema");
  ClassifierExamples out;
  for (const auto& e : j["examples"]) {
    auto task = task_from_string(e.value("task", ""));
    if (!task) throw SchemaError(origin + ": example with unknown task " + e.value("task", ""));
    out.examples.push_back({*task, e.at("question").get<std::string>()});
  }
  return out;
}

ClassifierExamples ClassifierExamples::load(const std::filesystem::path& path) {
  return from_json(read_json(path, "classifier examples"), path.string());
}

std::vector<ClassifierExamples::Example> ClassifierExamples::pick(std::size_t k) const {
  std::vector<Example> out;
  for (auto t : kAllTasks) {
    std::size_t n = 0;
    for (const auto& e : examples)
      if (e.task == t && n < k) {
        out.push_back(e);
        ++n;
      }
  }
  return out;
}

}  // namespace nba
