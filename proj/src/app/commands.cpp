#include "nba/app/commands.hpp"

#include <atomic>
#include <fstream>
#include <thread>

#include "nba/eval/leakage.hpp"
#include "nba/eval/pricing.hpp"

namespace nba {

namespace fs = std::filesystem;
using nlohmann::json;

int cmd_ask(App& app, const AskOptions& options, std::ostream& out) {
  const auto model = options.model ? *options.model : app.config().method == Method::code ? std::string{}
                                                                                         : app.default_model();
  const auto rec = app.answer(options.question, model, app.config().method);
  if (options.json) {
    out << to_json(rec).dump(2) << "\n";
    return kExitOk;
  }
  out << "Method: " << to_string(rec.method) << "\n";
  out << "Model: " << rec.model << "\n";
  out << "Task: " << to_string(rec.task) << "\n";
  if (rec.ok())
    out << "Answer: " << rec.final_answer << "\n";
  else
    out << "Error: " << rec.error_cause << ": " << *rec.error << "\n";
  for (const auto& w : rec.warnings) out << "Warning: " << w << "\n";
  if (options.trace) {
    out << "\nTrace:\n";
    for (const auto& t : rec.traces) out << to_json(t).dump(2) << "\n";
  }
  out << "Usage: " << rec.total_usage.est_tokens_in << " tokens in, " << rec.total_usage.est_tokens_out
      << " tokens out (estimated)\n";
  return kExitOk;
}

int cmd_bench(App& app, std::ostream& out, BenchmarkRun* result) {
  const auto& cfg = app.config();
  const auto& items = app.dataset();
  PricingTable pricing;
  if (!cfg.pricing.empty()) pricing = PricingTable::load(cfg.pricing);

  BenchmarkConfig bc;
  bc.methods = cfg.methods;
  bc.mode = cfg.mode;
  bc.workers = cfg.workers;
  const bool needs_chat = std::any_of(bc.methods.begin(), bc.methods.end(), [](Method m) { return m != Method::code; });
  if (needs_chat) bc.models = cfg.models.empty() ? std::vector<std::string>{app.default_model()} : cfg.models;
  for (const auto& m : bc.models) app.catalog().get(m);
  if (std::find(bc.methods.begin(), bc.methods.end(), Method::code) != bc.methods.end())
    bc.embedding_model = app.embedding_model();

  auto run = run_benchmark(
      items, bc,
      [&app](const DatasetItem& item, const std::string& model, Method method, std::stop_token stop) {
        return app.answer(item.question, model, method, stop);
      },
      pricing);
  app.finish();

  if (!cfg.output_dir.empty()) {
    write_reports(run.report, cfg.output_dir);
    std::ofstream jl(cfg.output_dir / "questions.jsonl", std::ios::trunc);
    for (std::size_t i = 0; i < run.records.size(); ++i) {
      json line = to_json(run.records[i]);
      line["item_id"] = run.report.rows[i].item_id;
      line["score"] = run.report.rows[i].score;
      jl << line.dump() << "\n";
    }
  }
  out << format_table(run.report);
  for (const auto& w : run.report.warnings) out << "warning: " << w << "\n";
  const double rate = run.report.failure_rate();
  const int code = rate > cfg.failure_threshold ? kExitPartialFailure : kExitOk;
  if (code != kExitOk)
    out << "failure rate " << format_number(rate) << " exceeds threshold " << format_number(cfg.failure_threshold)
        << "\n";
  if (result) *result = std::move(run);
  return code;
}

int cmd_index_build(App& app, std::ostream& out) {
  if (app.config().index.empty()) throw ConfigError("no index path configured");
  const auto index = app.build_index();
  if (app.config().index.has_parent_path()) fs::create_directories(app.config().index.parent_path());
  save_index(index, app.config().index);
  app.finish();
  out << "indexed " << index.entries.size() << " questions (" << index.embedding_model_id << ", dimension "
      << index.dimension << ") -> " << app.config().index.string() << "\n";
  return kExitOk;
}

int cmd_fixtures_capture(App& app, std::ostream& out, std::size_t limit) {
  if (app.config().offline) throw ConfigError("fixture capture needs network access; drop --offline");
  if (!app.toolbox()->fixtures()) throw ConfigError("fixture capture needs a fixture directory");
  const auto& items = app.dataset();
  const std::size_t n = limit == 0 ? items.size() : std::min(limit, items.size());
  const auto before = app.toolbox()->fixtures()->size();

  std::vector<std::string> failures(n);
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(app.config().workers, std::max<std::size_t>(n, 1)); ++w)
      pool.emplace_back([&](std::stop_token stop) {
        for (auto i = next.fetch_add(1); i < n && !stop.stop_requested(); i = next.fetch_add(1)) {
          try {
            auto r = app.run_plan_deterministic(items[i].question, items[i].task, stop);
            if (!r.ok()) failures[i] = r.failure->cause() + ": " + r.failure->what();
          } catch (const std::exception& e) {
            failures[i] = e.what();
          }
        }
      });
    for (auto& t : pool) t.join();
  }
  app.finish();

  std::size_t failed = 0, failed_excluded = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (failures[i].empty()) continue;
    ++failed;
    if (items[i].excluded) ++failed_excluded;
    out << (items[i].excluded ? "excluded " : "failed   ") << items[i].id << ": " << failures[i] << "\n";
  }
  const auto after = app.toolbox()->fixtures()->size();
  out << "captured " << n << " questions: " << (n - failed) << " resolved, " << failed << " failed (" << failed_excluded
      << " excluded); " << (after - before) << " new fixtures, " << after << " total; "
      << app.ncbi_network_requests() << " network requests\n";
  return failed > failed_excluded ? kExitPartialFailure : kExitOk;
}

int cmd_audit(App& app, const std::vector<fs::path>& roots, std::ostream& out) {
  const auto report = audit_leakage(app.dataset(), roots);
  out << "scanned " << report.files_scanned.size() << " files for " << report.golds_checked << " gold answers\n";
  if (!report.exempted.empty())
    out << "closed-vocabulary answers not counted: " << report.exempted.size() << "\n";
  for (const auto& h : report.hits) out << "LEAK " << h.file << ": '" << h.gold << "' (" << h.item_id << ")\n";
  out << report.hits.size() << " hits\n";
  return report.hits.empty() ? kExitOk : kExitPartialFailure;
}

}  // namespace nba
