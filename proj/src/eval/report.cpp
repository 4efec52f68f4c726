#include "nba/eval/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "nba/common/error.hpp"
#include "nba/common/text.hpp"

namespace nba {

using nlohmann::json;

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_number(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

const GroupScore* ScoreReport::group(const std::string& model, Method method) const {
  for (const auto& g : groups)
    if (g.model == model && g.method == method) return &g;
  return nullptr;
}

double ScoreReport::failure_rate() const {
  if (rows.empty()) return 0.0;
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.error_cause.empty() ? 0 : 1;
  return static_cast<double>(failed) / static_cast<double>(rows.size());
}

ScoreReport build_report(std::vector<QuestionResult> rows, ScoringMode mode,
                         const std::vector<std::pair<std::string, Method>>& group_order) {
  ScoreReport rep;
  rep.mode = mode;
  std::vector<std::pair<std::string, Method>> order = group_order;
  std::set<std::pair<std::string, int>> extra;
  for (const auto& r : rows)
    if (std::find(order.begin(), order.end(), std::pair{r.model, r.method}) == order.end())
      extra.insert({r.model, static_cast<int>(r.method)});
  for (const auto& [m, k] : extra) order.emplace_back(m, static_cast<Method>(k));
  auto group_rank = [&](const QuestionResult& r) {
    return std::find(order.begin(), order.end(), std::pair{r.model, r.method}) - order.begin();
  };
  std::stable_sort(rows.begin(), rows.end(), [&](const QuestionResult& a, const QuestionResult& b) {
    const auto ga = group_rank(a), gb = group_rank(b);
    if (ga != gb) return ga < gb;
    if (a.task != b.task) return task_index(a.task) < task_index(b.task);
    return a.item_index < b.item_index;
  });

  for (const auto& [model, method] : order) {
    GroupScore g;
    g.model = model;
    g.method = method;
    std::map<TaskType, double> sums;
    for (const auto& r : rows) {
      if (r.model != model || r.method != method) continue;
      sums[r.task] += r.score;
      ++g.per_task_count[r.task];
      ++g.questions;
      g.failures += r.error_cause.empty() ? 0 : 1;
      g.est_tokens_in += r.usage.est_tokens_in;
      g.est_tokens_out += r.usage.est_tokens_out;
      if (r.cost)
        g.dollars += *r.cost;
      else
        g.cost_complete = false;
    }
    if (g.questions == 0) continue;
    double task_sum = 0;
    for (auto t : kAllTasks) {
      if (!g.per_task_count.contains(t)) continue;
      g.per_task[t] = sums[t] / static_cast<double>(g.per_task_count[t]);
      task_sum += g.per_task[t];
    }
    g.overall = g.per_task.empty() ? 0.0 : task_sum / static_cast<double>(g.per_task.size());
    rep.groups.push_back(std::move(g));
  }
  for (const auto& r : rows) {
    rep.total_tokens_in += r.usage.est_tokens_in;
    rep.total_tokens_out += r.usage.est_tokens_out;
    if (r.cost) rep.total_dollars += *r.cost;
  }
  rep.rows = std::move(rows);
  return rep;
}

json summary_json(const ScoreReport& report) {
  json groups = json::array();
  for (const auto& g : report.groups) {
    json per_task = json::object();
    for (const auto& [t, s] : g.per_task)
      per_task[std::string(to_string(t))] = {{"mean", s}, {"count", g.per_task_count.at(t)}};
    groups.push_back({{"model", g.model},
                      {"method", to_string(g.method)},
                      {"per_task", per_task},
                      {"overall", g.overall},
                      {"questions", g.questions},
                      {"failures", g.failures},
                      {"est_tokens_in", g.est_tokens_in},
                      {"est_tokens_out", g.est_tokens_out},
                      {"dollars", g.cost_complete ? json(g.dollars) : json(nullptr)}});
  }
  return {{"schema_version", 1},
          {"scoring_mode", to_string(report.mode)},
          {"groups", groups},
          {"totals",
           {{"questions", report.rows.size()},
            {"est_tokens_in", report.total_tokens_in},
            {"est_tokens_out", report.total_tokens_out},
            {"dollars", report.total_dollars}}},
          {"warnings", report.warnings}};
}

std::string per_question_csv(const ScoreReport& report) {
  std::ostringstream out;
  out << "item_index,item_id,task,method,model,score,prediction,gold,chars_in,chars_out,est_tokens_in,est_tokens_"
         "out,cost,error\n";
  for (const auto& r : report.rows) {
    out << r.item_index << ',' << csv_field(r.item_id) << ',' << to_string(r.task) << ',' << to_string(r.method) << ','
        << csv_field(r.model) << ',' << format_number(r.score) << ',' << csv_field(r.prediction) << ','
        << csv_field(text::join(r.gold, "|")) << ',' << r.usage.chars_in << ',' << r.usage.chars_out << ','
        << r.usage.est_tokens_in << ',' << r.usage.est_tokens_out << ',' << (r.cost ? format_number(*r.cost) : "")
        << ',' << csv_field(r.error_cause) << '\n';
  }
  return out.str();
}

std::string per_task_csv(const ScoreReport& report) {
  std::ostringstream out;
  out << "model,method,task,area,questions,mean_score\n";
  for (const auto& g : report.groups) {
    for (const auto& [t, s] : g.per_task)
      out << csv_field(g.model) << ',' << to_string(g.method) << ',' << to_string(t) << ',' << to_string(area_of(t))
          << ',' << g.per_task_count.at(t) << ',' << format_number(s) << '\n';
    out << csv_field(g.model) << ',' << to_string(g.method) << ",Overall,," << g.questions << ','
        << format_number(g.overall) << '\n';
  }
  return out.str();
}

std::string heatmap_csv(const ScoreReport& report) {
  std::ostringstream out;
  out << "model,method";
  for (auto t : kAllTasks) out << ',' << to_string(t);
  out << ",Overall\n";
  for (const auto& g : report.groups) {
    out << csv_field(g.model) << ',' << to_string(g.method);
    for (auto t : kAllTasks) {
      out << ',';
      if (auto it = g.per_task.find(t); it != g.per_task.end()) out << format_number(it->second);
    }
    out << ',' << format_number(g.overall) << '\n';
  }
  return out.str();
}

std::string format_table(const ScoreReport& report) {
  std::ostringstream out;
  char buf[160];
  for (const auto& g : report.groups) {
    out << g.model << " / " << to_string(g.method) << "  (" << to_string(report.mode) << " scoring)\n";
    for (const auto& [t, s] : g.per_task) {
      std::snprintf(buf, sizeof buf, "  %-24s %4zu  %6.3f\n", std::string(to_string(t)).c_str(),
                    g.per_task_count.at(t), s);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "  %-24s %4zu  %6.3f\n", "Overall", g.questions, g.overall);
    out << buf;
    if (g.cost_complete)
      std::snprintf(buf, sizeof buf, "  tokens in/out %llu/%llu, est. cost $%.6f, failures %zu\n",
                    static_cast<unsigned long long>(g.est_tokens_in), static_cast<unsigned long long>(g.est_tokens_out),
                    g.dollars, g.failures);
    else
      std::snprintf(buf, sizeof buf, "  tokens in/out %llu/%llu, est. cost n/a, failures %zu\n",
                    static_cast<unsigned long long>(g.est_tokens_in), static_cast<unsigned long long>(g.est_tokens_out),
                    g.failures);
    out << buf;
  }
  return out.str();
}

namespace {

void write_text(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << s;
}

}  // namespace

void write_reports(const ScoreReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "per_question.csv", per_question_csv(report));
  write_text(dir / "per_task.csv", per_task_csv(report));
  write_text(dir / "heatmap.csv", heatmap_csv(report));
  write_text(dir / "summary.json", summary_json(report).dump(2) + "\n");
}

}  // namespace nba
