#include "nba/exec/answer.hpp"

#include <algorithm>
#include <regex>

#include "nba/common/text.hpp"

namespace nba {

using nlohmann::json;

std::string_view to_string(Method m) {
  switch (m) {
    case Method::agentic:
      return "agentic";
    case Method::code:
      return "code";
    case Method::direct:
      return "direct";
    case Method::genegpt:
      return "genegpt";
  }
  return "?";
}

std::optional<Method> method_from_string(std::string_view s) {
  const auto l = text::to_lower(text::trim(s));
  if (l == "agentic") return Method::agentic;
  if (l == "code") return Method::code;
  if (l == "direct") return Method::direct;
  if (l == "genegpt") return Method::genegpt;
  return std::nullopt;
}

json to_json(const AnswerRecord& r) {
  json traces = json::array();
  for (const auto& t : r.traces) traces.push_back(to_json(t));
  return {{"question", r.question},
          {"method", to_string(r.method)},
          {"model", r.model},
          {"task", to_string(r.task)},
          {"final_answer", r.final_answer},
          {"canonical_answer", r.canonical_answer},
          {"traces", traces},
          {"total_usage", to_json(r.total_usage)},
          {"error", r.error ? json(*r.error) : json(nullptr)},
          {"error_cause", r.error_cause},
          {"warnings", r.warnings},
          {"elapsed_ms", r.elapsed_ms},
          {"excluded_wait_ms", r.excluded_wait_ms}};
}

AnswerRecord answer_record_from_json(const json& j) {
  AnswerRecord r;
  r.question = j.at("question").get<std::string>();
  const auto m = method_from_string(j.at("method").get<std::string>());
  if (!m) throw SchemaError("answer record has unknown method");
  r.method = *m;
  r.model = j.value("model", "");
  r.task = task_from_string(j.value("task", "Unknown")).value_or(TaskType::Unknown);
  r.final_answer = j.value("final_answer", "");
  r.canonical_answer = j.value("canonical_answer", "");
  for (const auto& t : j.value("traces", json::array())) r.traces.push_back(step_trace_from_json(t));
  r.total_usage = usage_from_json(j.value("total_usage", json::object()));
  if (j.contains("error") && !j["error"].is_null()) r.error = j["error"].get<std::string>();
  r.error_cause = j.value("error_cause", "");
  r.warnings = j.value("warnings", std::vector<std::string>{});
  r.elapsed_ms = j.value("elapsed_ms", std::int64_t{0});
  r.excluded_wait_ms = j.value("excluded_wait_ms", std::int64_t{0});
  return r;
}

namespace {

std::string basic(std::string_view s) {
  std::string out = text::collapse_whitespace(text::to_lower(text::trim(s)));
  for (;;) {
    const auto before = out.size();
    while (!out.empty() && (out.back() == '.' || out.back() == '"' || out.back() == '\'' || out.back() == '`'))
      out.pop_back();
    while (!out.empty() && (out.front() == '"' || out.front() == '\'' || out.front() == '`')) out.erase(0, 1);
    out = text::trim(out);
    if (out.size() == before) break;
  }
  return out;
}

std::string chromosome(std::string s) {
  if (s.empty()) return s;
  static const std::regex long_form(R"(^chromosome\s*)");
  s = std::regex_replace(s, long_form, "chr");
  if (s.rfind("chr", 0) != 0) s = "chr" + s;
  // "chr 2" -> "chr2"
  if (s.size() > 3 && s[3] == ' ') s.erase(3, 1);
  return s;
}

std::string coordinates(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  s.erase(std::remove(s.begin(), s.end(), ','), s.end());
  // Dropping separators can uncover a quote or period basic() left alone.
  return chromosome(basic(s));
}

std::string symbol(std::string s) {
  while (!s.empty() && !std::isalnum(static_cast<unsigned char>(s.back()))) s.pop_back();
  while (!s.empty() && !std::isalnum(static_cast<unsigned char>(s.front()))) s.erase(0, 1);
  return s;
}

}  // namespace

std::vector<std::string> split_gene_list(std::string_view answer) {
  std::vector<std::string> out;
  for (auto& part : text::split_any(text::to_lower(answer), ",; \t\r\n")) {
    auto s = symbol(part);
    if (!s.empty() && std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  return out;
}

std::string normalize_answer(AnswerKind kind, std::string_view answer) {
  std::string s = basic(answer);
  switch (kind) {
    case AnswerKind::Chromosome:
      return chromosome(s);
    case AnswerKind::Coordinates:
      return coordinates(s);
    case AnswerKind::GeneList:
      return text::join(split_gene_list(s), ", ");
    case AnswerKind::Symbol:
      return symbol(s);
    case AnswerKind::Boolean:
    case AnswerKind::Species:
      return s;
  }
  return s;
}

std::string normalize_answer(TaskType task, std::string_view answer) {
  if (task == TaskType::Unknown) return basic(answer);
  return normalize_answer(answer_kind(task), answer);
}

}  // namespace nba
