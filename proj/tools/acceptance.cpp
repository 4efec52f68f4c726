// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any offline
// criterion fails. Criterion 3 needs live NCBI and a model endpoint and is
// reported as not run unless NBA_LIVE=1.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "nba/app/commands.hpp"
#include "nba/common/text.hpp"
#include "nba/eval/leakage.hpp"
#include "nba/eval/pricing.hpp"
#include "nba/exec/answer.hpp"
#include "nba/gateway/truncate.hpp"
#include "nba/ncbi/toolbox.hpp"
#include "nba/sandbox/mock_ncbi.hpp"
#include "nba/sandbox/server.hpp"

namespace fs = std::filesystem;
using namespace nba;
using Clk = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

fs::path g_root;
int g_stress_seconds = 30;

double seconds_since(Clk::time_point t0) { return std::chrono::duration<double>(Clk::now() - t0).count(); }

std::string fmt(double v, int digits = 3) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

RunConfig offline_config(Method method) {
  std::map<std::string, std::string> flags = {{"offline", "true"}, {"output_dir", ""}, {"method", to_string(method).data()},
                                              {"methods", to_string(method).data()}};
  return resolve_config(flags, {}, g_root / "config" / "nba.json");
}

BenchmarkRun bench(Method method, std::size_t workers, std::size_t* ncbi_requests = nullptr,
                   std::size_t* model_requests = nullptr) {
  auto cfg = offline_config(method);
  cfg.workers = workers;
  App app(cfg, {});
  BenchmarkRun run;
  std::ostringstream sink;
  cmd_bench(app, sink, &run);
  if (ncbi_requests) *ncbi_requests = app.ncbi_network_requests();
  if (model_requests) *model_requests = app.model_network_requests();
  return run;
}

bool exact_match_task(TaskType t) { return t != TaskType::GeneDiseaseAssociation && t != TaskType::AlignHuman; }

// 1. Code mode over the captured fixtures scores 1.00 offline.
Outcome offline_code() {
  const auto t0 = Clk::now();
  std::size_t ncbi = 0, model = 0;
  const auto run = bench(Method::code, 4, &ncbi, &model);
  const double secs = seconds_since(t0);
  std::size_t n = 0;
  double sum = 0;
  for (const auto& r : run.report.rows)
    if (exact_match_task(r.task)) {
      ++n;
      sum += r.score;
    }
  const double exact = n ? sum / n : 0;
  const auto* g = run.report.groups.empty() ? nullptr : &run.report.groups.front();
  const bool pass = n > 0 && exact == 1.0 && secs < 60 && ncbi == 0 && model == 0;
  return {pass, "exact-match " + fmt(exact) + " over " + std::to_string(n) + " questions, overall " +
                    fmt(g ? g->overall : 0) + ", " + fmt(secs, 1) + " s, " + std::to_string(ncbi + model) +
                    " network requests"};
}

// 2. Agentic replay: thresholds and bit-identical reports across runs.
Outcome offline_agentic(BenchmarkRun& keep) {
  std::size_t ncbi = 0, model = 0;
  auto a = bench(Method::agentic, 4, &ncbi, &model);
  auto b = bench(Method::agentic, 1);
  const auto render = [](const ScoreReport& r) {
    return summary_json(r).dump() + per_question_csv(r) + per_task_csv(r) + heatmap_csv(r);
  };
  const bool identical = render(a.report) == render(b.report);
  if (a.report.groups.size() != 1) return {false, "expected one model group"};
  const auto& g = a.report.groups.front();
  double worst = 1.0;
  std::string worst_task;
  for (const auto& [task, s] : g.per_task)
    if (s < worst) {
      worst = s;
      worst_task = to_string(task);
    }
  const bool pass = g.overall >= 0.95 && worst >= 0.85 && g.per_task.size() == 9 && identical && ncbi + model == 0;
  keep = std::move(a);
  return {pass, "overall " + fmt(g.overall) + ", lowest task " + fmt(worst) + (worst_task.empty() ? "" : " (" + worst_task + ")") +
                    ", reports " + (identical ? "identical" : "DIFFER") + " across runs"};
}

// 3. Live run. Needs a real GeneTuring file; the committed dataset is
// synthetic and unknown to NCBI.
Outcome live_run() {
  const char* live = std::getenv("NBA_LIVE");
  if (!live || std::string(live) != "1")
    return {false, "not run: needs live NCBI, a 7-10B model endpoint and the real dataset "
                   "(NBA_LIVE=1, NBA_DATASET, NBA_MODELS)"};
  std::map<std::string, std::string> flags = {{"offline", "false"}, {"method", "agentic"}, {"methods", "agentic"}};
  auto cfg = resolve_config(flags, process_env(), g_root / "config" / "nba.json");
  const auto t0 = Clk::now();
  App app(cfg, {});
  BenchmarkRun run;
  std::ostringstream sink;
  cmd_bench(app, sink, &run);
  const double hours = seconds_since(t0) / 3600.0;
  bool pass = !run.report.groups.empty() && hours <= 2.0;
  std::string detail;
  for (const auto& g : run.report.groups) {
    pass = pass && g.overall >= 0.85;
    detail += g.model + " " + fmt(g.overall) + "; ";
  }
  return {pass, detail + fmt(hours, 2) + " h"};
}

// 4. Scoring oracles.
Outcome scoring_oracles() {
  std::mt19937_64 rng(4);
  std::vector<std::string> failures;

  const double legacy = score_answer(TaskType::AlignHuman, "chr8:100-200", {"chr8:5000-6000"}, ScoringMode::legacy);
  const double strict = score_answer(TaskType::AlignHuman, "chr8:100-200", {"chr8:5000-6000"}, ScoringMode::strict);
  if (legacy != 0.5) failures.push_back("legacy chromosome-only = " + fmt(legacy));
  if (strict != 0.0) failures.push_back("strict chromosome-only = " + fmt(strict));

  std::size_t mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::string> pred, gold;
    const auto np = rng() % 8, ng = 1 + rng() % 6;
    for (std::size_t k = 0; k < np; ++k) pred.push_back("G" + std::to_string(rng() % 12));
    for (std::size_t k = 0; k < ng; ++k) gold.push_back("G" + std::to_string(rng() % 12));
    const std::set<std::string> ps(pred.begin(), pred.end()), gs(gold.begin(), gold.end());
    std::size_t inter = 0;
    for (const auto& g : gs) inter += ps.count(g);
    const double oracle = pred.empty() ? 0.0 : static_cast<double>(inter) / gs.size();
    const double got = score_answer(TaskType::GeneDiseaseAssociation, text::join(pred, ", "), gold);
    if (got != oracle) ++mismatches;
  }
  if (mismatches) failures.push_back(std::to_string(mismatches) + " recall mismatches");

  // Range over random predictions for every task.
  static const std::vector<std::string> pool = {"chr1", "chr8:1-100", "TRUE", "NA", "human", "BRCA1", "kras, tp53",
                                                "", "chrX:5-2", "mouse", "x", "chr8:50-150"};
  std::size_t out_of_range = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto task = kAllTasks[rng() % kAllTasks.size()];
    const auto s =
        score_answer(task, pool[rng() % pool.size()], {pool[rng() % pool.size()], pool[rng() % pool.size()]},
                     rng() % 2 ? ScoringMode::legacy : ScoringMode::strict);
    if (!(s >= 0.0 && s <= 1.0)) ++out_of_range;
  }
  if (out_of_range) failures.push_back(std::to_string(out_of_range) + " scores outside [0,1]");

  // Overall = mean of the nine task means.
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<QuestionResult> rows;
    std::map<TaskType, std::pair<double, std::size_t>> acc;
    for (std::size_t i = 0; i < 200; ++i) {
      QuestionResult r;
      r.item_index = i;
      r.item_id = "q" + std::to_string(i);
      r.task = kAllTasks[i < 9 ? i : rng() % 9];
      r.model = "m";
      r.score = std::uniform_real_distribution<double>(0, 1)(rng);
      acc[r.task].first += r.score;
      acc[r.task].second++;
      rows.push_back(r);
    }
    double mean = 0;
    for (const auto& [_, v] : acc) mean += v.first / v.second;
    mean /= acc.size();
    const auto report = build_report(rows, ScoringMode::strict);
    worst = std::max(worst, std::abs(report.groups.front().overall - mean));
  }
  if (worst > 1e-12) failures.push_back("overall off by " + format_number(worst));

  return {failures.empty(), failures.empty() ? "legacy 0.5, 1000 recall pairs, [0,1] range, overall within 1e-12"
                                             : text::join(failures, "; ")};
}

// 5. Toolbox: cache hits stay off the wire, keys ignore order, the limiter
// holds its cap.
Outcome toolbox_properties() {
  std::vector<std::string> failures;
  {
    auto world = std::make_shared<const sandbox::World>(sandbox::generate_world());
    auto mock = std::make_shared<sandbox::MockNcbi>(world);
    sandbox::LocalServer server([mock](const HttpRequest& r) { return mock->handle(r); });
    ToolboxConfig tc;
    tc.eutils_base = server.base_url() + "/entrez/eutils";
    tc.rate_cap = 100;
    NcbiToolbox tb(tc, std::make_shared<HttplibTransport>(), std::make_shared<SystemClock>());
    EutilsRequest req{EutilsUtil::esummary, "gene", {{"id", world->genes.front().uid}}};
    const auto first = tb.eutils_call(req);
    const auto sockets = server.requests();
    const auto second = tb.eutils_call(req);
    if (sockets != 1 || server.requests() != sockets || !second.from_cache || second.body != first.body)
      failures.push_back("cache hit reached the server (" + std::to_string(server.requests()) + " requests)");
  }
  {
    std::mt19937_64 rng(5);
    std::size_t bad = 0;
    for (int i = 0; i < 1000; ++i) {
      Params p;
      const auto n = 1 + rng() % 6;
      for (std::size_t k = 0; k < n; ++k) p.push_back({"p" + std::to_string(k), std::to_string(rng() % 100)});
      p.push_back({"api_key", "secret" + std::to_string(rng())});
      const auto base = canonical_key("eutils", "esearch", p);
      std::shuffle(p.begin(), p.end(), rng);
      if (canonical_key("eutils", "esearch", p) != base || base.find("secret") != std::string::npos) ++bad;
    }
    if (bad) failures.push_back(std::to_string(bad) + " key permutations differ");
  }
  std::size_t max_in_window = 0;
  {
    constexpr std::size_t cap = 10;
    RateLimiter limiter(cap, std::make_shared<SystemClock>());
    std::mutex mu;
    std::vector<Clk::time_point> grants;
    const auto stop_at = Clk::now() + std::chrono::seconds(g_stress_seconds);
    {
      std::vector<std::thread> pool;
      for (int w = 0; w < 8; ++w)
        pool.emplace_back([&] {
          while (Clk::now() < stop_at) {
            limiter.acquire();
            std::lock_guard lock(mu);
            grants.push_back(Clk::now());
          }
        });
      for (auto& t : pool) t.join();
    }
    std::sort(grants.begin(), grants.end());
    std::size_t lo = 0;
    for (std::size_t hi = 0; hi < grants.size(); ++hi) {
      while (grants[hi] - grants[lo] >= std::chrono::milliseconds(1000)) ++lo;
      max_in_window = std::max(max_in_window, hi - lo + 1);
    }
    if (max_in_window > cap) failures.push_back("limiter allowed " + std::to_string(max_in_window) + " in 1 s");
    if (grants.size() < cap * static_cast<std::size_t>(g_stress_seconds) / 2)
      failures.push_back("limiter starved: " + std::to_string(grants.size()) + " grants");
  }
  return {failures.empty(), failures.empty() ? "0 network calls on cache hit, 1000 permutations, max " +
                                                   std::to_string(max_in_window) + "/s over " +
                                                   std::to_string(g_stress_seconds) + " s with 8 threads"
                                             : text::join(failures, "; ")};
}

// 6. Gateway: token estimate, truncation, retry.
Outcome gateway_properties() {
  std::vector<std::string> failures;
  std::mt19937_64 rng(6);
  std::vector<std::uint64_t> lengths(1000);
  for (auto& n : lengths) n = rng() % 1'000'000;
  std::sort(lengths.begin(), lengths.end());
  std::size_t inexact = 0, nonmonotone = 0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const auto t = estimate_tokens(lengths[i], 4.0);
    if (t != (lengths[i] + 3) / 4) ++inexact;
    if (i && t < estimate_tokens(lengths[i - 1], 4.0)) ++nonmonotone;
  }
  if (inexact || nonmonotone)
    failures.push_back(std::to_string(inexact) + " inexact, " + std::to_string(nonmonotone) + " non-monotone");

  std::size_t trunc_bad = 0;
  for (int i = 0; i < 300; ++i) {
    std::string doc(rng() % 20'000, ' ');
    for (auto& c : doc) c = static_cast<char>(32 + rng() % 95);
    const std::size_t budget = kElisionMarker.size() + 1 + rng() % 10'000;
    const auto once = truncate_document(doc, budget);
    if (once.size() > budget || truncate_document(once, budget) != once || (doc.size() <= budget && once != doc))
      ++trunc_bad;
  }
  if (trunc_bad) failures.push_back(std::to_string(trunc_bad) + " truncation violations");

  const std::string ok_body =
      R"({"id":"x","choices":[{"index":0,"message":{"role":"assistant","content":"Answer: 1"}}],"usage":{}})";
  auto endpoint_for = [](const sandbox::LocalServer& s) {
    ModelEndpoint e;
    e.name = "scripted";
    e.base_url = s.base_url() + "/v1";
    e.model_id = "scripted";
    return e;
  };
  const std::vector<ChatMessage> msgs = {{"user", "hi"}};
  {
    auto script = std::make_shared<sandbox::ScriptedResponder>(std::vector<HttpResponse>{
        sandbox::make_response(429, "{}"), sandbox::make_response(429, "{}"), sandbox::make_response(200, ok_body)});
    sandbox::LocalServer server([script](const HttpRequest& r) { return (*script)(r); });
    ModelGateway gw(std::make_shared<HttplibTransport>(), std::make_shared<ManualClock>());
    try {
      const auto r = gw.chat_complete(endpoint_for(server), msgs);
      if (script->calls() != 3 || r.usage.attempts != 3) failures.push_back("429,429,200 took " + std::to_string(script->calls()) + " calls");
    } catch (const std::exception& e) {
      failures.push_back(std::string("429,429,200 failed: ") + e.what());
    }
  }
  for (int status : {400, 401, 404}) {
    auto script = std::make_shared<sandbox::ScriptedResponder>(
        std::vector<HttpResponse>{sandbox::make_response(status, R"({"error":{"message":"no"}})"),
                                  sandbox::make_response(200, ok_body)});
    sandbox::LocalServer server([script](const HttpRequest& r) { return (*script)(r); });
    ModelGateway gw(std::make_shared<HttplibTransport>(), std::make_shared<ManualClock>());
    bool threw = false;
    try {
      gw.chat_complete(endpoint_for(server), msgs);
    } catch (const std::exception&) {
      threw = true;
    }
    if (!threw || script->calls() != 1)
      failures.push_back("status " + std::to_string(status) + " retried (" + std::to_string(script->calls()) + " calls)");
  }
  return {failures.empty(), failures.empty() ? "1000 lengths exact at 4.0, 300 truncations, 429 retried, 4xx stops"
                                             : text::join(failures, "; ")};
}

// 7. No gold answer appears in prompts, plans or config.
Outcome leakage() {
  auto cfg = offline_config(Method::agentic);
  const auto items = load_dataset(cfg.dataset);
  const auto report = audit_leakage(items, {g_root / "config"});
  std::string detail = std::to_string(report.files_scanned.size()) + " files, " + std::to_string(report.golds_checked) +
                       " golds, " + std::to_string(report.hits.size()) + " hits";
  for (std::size_t i = 0; i < std::min<std::size_t>(report.hits.size(), 3); ++i)
    detail += "; " + report.hits[i].file + ": " + report.hits[i].gold;
  return {report.hits.empty() && !report.files_scanned.empty(), detail};
}

// 8. Dollars add up; a zero-usage run costs nothing.
Outcome cost_accounting(const BenchmarkRun& run) {
  double sum = 0;
  std::size_t priced = 0;
  for (const auto& r : run.report.rows)
    if (r.cost) {
      sum += *r.cost;
      ++priced;
    }
  const double diff = std::abs(run.report.total_dollars - sum);

  const auto pricing = PricingTable::load(g_root / "config" / "pricing.json");
  std::vector<QuestionResult> rows;
  for (std::size_t i = 0; i < 18; ++i) {
    QuestionResult r;
    r.item_index = i;
    r.item_id = "z" + std::to_string(i);
    r.task = kAllTasks[i % 9];
    r.model = "gpt-4o-mini";
    r.cost = estimate_cost(UsageMetrics{}, r.model, pricing);
    rows.push_back(r);
  }
  const auto zero = build_report(rows, ScoringMode::strict);
  const bool pass = priced == run.report.rows.size() && priced > 0 && diff <= 1e-9 && zero.total_dollars == 0.0 &&
                    run.report.total_dollars > 0;
  return {pass, "total $" + fmt(run.report.total_dollars, 9) + " vs per-question sum off by " +
                    format_number(diff) + "; zero-usage run $" + fmt(zero.total_dollars, 9)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Acceptance checks."};
  std::string root = NBA_SOURCE_DIR;
  cli.add_option("--root", root, "repository root");
  cli.add_option("--stress-seconds", g_stress_seconds, "rate-limiter stress duration");
  CLI11_PARSE(cli, argc, argv);
  g_root = root;

  int failed_offline = 0;
  BenchmarkRun agentic;
  const auto report = [&](int n, const std::string& name, const std::function<Outcome()>& check, bool networked) {
    Outcome o;
    const auto t0 = Clk::now();
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass && !networked) ++failed_offline;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << n << " " << name << ": " << o.detail << " [" << fmt(seconds_since(t0), 1)
              << " s]" << std::endl;
  };
  report(1, "offline code self-consistency", offline_code, false);
  report(2, "offline agentic replay", [&] { return offline_agentic(agentic); }, false);
  report(3, "live networked score", live_run, true);
  report(4, "scoring oracles", scoring_oracles, false);
  report(5, "toolbox properties", toolbox_properties, false);
  report(6, "gateway properties", gateway_properties, false);
  report(7, "leakage audit", leakage, false);
  report(8, "cost accounting", [&] { return cost_accounting(agentic); }, false);
  return failed_offline == 0 ? 0 : 1;
}
