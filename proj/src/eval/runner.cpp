#include "nba/eval/runner.hpp"

#include <atomic>
#include <mutex>
#include <set>
#include <thread>

#include "nba/exec/executor.hpp"

namespace nba {

namespace {

struct Job {
  std::size_t item;
  std::string model;
  Method method;
};

}  // namespace

BenchmarkRun run_benchmark(const std::vector<DatasetItem>& items, const BenchmarkConfig& config,
                           const AnswerFn& answer, const PricingTable& pricing) {
  if (config.methods.empty()) throw ConfigError("benchmark needs at least one method");
  if (config.workers < 1) throw ConfigError("benchmark needs at least one worker");
  if (!answer) throw ConfigError("benchmark has no answer function");

  std::vector<std::pair<std::string, Method>> groups;
  for (auto m : config.methods) {
    if (m == Method::code) {
      if (config.embedding_model.empty()) throw ConfigError("method=code needs an embedding endpoint");
      groups.emplace_back(config.embedding_model, m);
    } else {
      if (config.models.empty()) throw ConfigError("method " + std::string(to_string(m)) + " needs a chat model");
      for (const auto& model : config.models) groups.emplace_back(model, m);
    }
  }
  std::vector<Job> jobs;
  for (const auto& [model, method] : groups)
    for (std::size_t i = 0; i < items.size(); ++i)
      if (!items[i].excluded) jobs.push_back({i, model, method});

  std::vector<AnswerRecord> records(jobs.size());
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    const auto n = std::min(config.workers, std::max<std::size_t>(jobs.size(), 1));
    for (std::size_t w = 0; w < n; ++w)
      pool.emplace_back([&](std::stop_token stop) {
        for (std::size_t j = next.fetch_add(1); j < jobs.size() && !stop.stop_requested(); j = next.fetch_add(1)) {
          const auto& job = jobs[j];
          const auto& item = items[job.item];
          try {
            records[j] = answer(item, job.model, job.method, stop);
          } catch (const std::exception& e) {
            AnswerRecord rec;
            rec.question = item.question;
            rec.method = job.method;
            rec.model = job.model;
            rec.error = e.what();
            rec.error_cause = error_cause_name(e);
            records[j] = std::move(rec);
          }
        }
      });
    // jthread's destructor requests stop first; join so workers finish.
    for (auto& t : pool) t.join();
  }

  std::vector<std::string> warnings;
  std::set<std::string> unpriced;
  std::vector<QuestionResult> rows;
  rows.reserve(jobs.size());
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const auto& job = jobs[j];
    const auto& item = items[job.item];
    const auto& rec = records[j];
    QuestionResult r;
    r.item_index = job.item;
    r.item_id = item.id;
    r.task = item.task;
    r.question = item.question;
    r.method = job.method;
    r.model = job.model;
    r.gold = item.gold;
    r.usage = rec.total_usage;
    if (rec.ok()) {
      r.prediction = rec.canonical_answer;
      r.score = score_answer(item.task, r.prediction, item.gold, config.mode);
    } else {
      r.error_cause = rec.error_cause.empty() ? "Error" : rec.error_cause;
    }
    try {
      r.cost = estimate_cost(r.usage, job.model, pricing);
    } catch (const UnknownModel& e) {
      if (unpriced.insert(job.model).second) warnings.push_back(std::string("UnknownModel: ") + e.what());
    }
    rows.push_back(std::move(r));
  }

  BenchmarkRun run;
  // Rows are re-sorted by the report; keep records aligned with them.
  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto rank = [&](std::size_t i) {
    return std::find(groups.begin(), groups.end(), std::pair{jobs[i].model, jobs[i].method}) - groups.begin();
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rank(a) != rank(b)) return rank(a) < rank(b);
    const auto ta = task_index(items[jobs[a].item].task), tb = task_index(items[jobs[b].item].task);
    if (ta != tb) return ta < tb;
    return jobs[a].item < jobs[b].item;
  });
  std::vector<QuestionResult> sorted_rows;
  for (auto i : order) {
    sorted_rows.push_back(std::move(rows[i]));
    run.records.push_back(std::move(records[i]));
  }
  run.report = build_report(std::move(sorted_rows), config.mode, groups);
  run.report.warnings = std::move(warnings);
  return run;
}

}  // namespace nba
