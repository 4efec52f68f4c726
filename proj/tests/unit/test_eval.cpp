#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <set>

#include "nba/common/text.hpp"
#include "nba/eval/dataset.hpp"
#include "nba/eval/leakage.hpp"
#include "nba/eval/pricing.hpp"
#include "nba/eval/report.hpp"
#include "nba/eval/runner.hpp"
#include "nba/eval/scoring.hpp"

namespace nba {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
const fs::path kRoot = NBA_SOURCE_DIR;

const std::vector<DatasetItem>& items() {
  static const auto d = load_dataset(kRoot / "data" / "geneturing.json");
  return d;
}

// ----- scoring ----------------------------------------------------------------

TEST(Score, Examples) {
  EXPECT_EQ(score_answer(TaskType::GeneLocation, "chr2", {"chr2"}), 1.0);
  EXPECT_EQ(score_answer(TaskType::GeneLocation, "Chromosome 2.", {"chr2"}), 1.0);
  EXPECT_EQ(score_answer(TaskType::GeneLocation, "chr3", {"chr2"}), 0.0);
  EXPECT_EQ(score_answer(TaskType::AlignHuman, "chr8:100-200", {"chr8:300-400"}, ScoringMode::legacy), 0.5);
  EXPECT_EQ(score_answer(TaskType::AlignHuman, "chr8:100-200", {"chr8:300-400"}, ScoringMode::strict), 0.0);
  EXPECT_EQ(score_answer(TaskType::AlignHuman, "chr8:300-400", {"chr8:300-400"}, ScoringMode::strict), 1.0);
  EXPECT_EQ(score_answer(TaskType::AlignHuman, "chr9:300-400", {"chr8:300-400"}, ScoringMode::legacy), 0.0);
  EXPECT_EQ(score_answer(TaskType::GeneDiseaseAssociation, "A, B", {"A", "B", "C", "D"}), 0.5);
  EXPECT_EQ(score_answer(TaskType::GeneAlias, "PTRH1", {"PTH1", "PTRH1"}), 1.0);
  for (auto t : kAllTasks) EXPECT_EQ(score_answer(t, "", items().front().gold), 0.0);
}

TEST(Score, IntervalParsing) {
  const auto iv = parse_interval("chr8:100-200");
  ASSERT_TRUE(iv);
  EXPECT_EQ(iv->chromosome, "chr8");
  EXPECT_EQ(iv->start, 100);
  EXPECT_EQ(iv->end, 200);
  EXPECT_TRUE(parse_interval("8:1,000-2,000"));
  EXPECT_FALSE(parse_interval("chr8"));
  EXPECT_FALSE(parse_interval("chr8:a-b"));
}

std::vector<std::string> random_genes(std::mt19937& rng, std::size_t n) {
  std::vector<std::string> g;
  for (std::size_t i = 0; i < n; ++i) g.push_back("G" + std::to_string(rng() % 40));
  return g;
}

// Recall against a brute-force set oracle; adding a correct gene never hurts.
TEST(Score, AssociationRecallMatchesSetOracle) {
  std::mt19937 rng(7);
  for (int i = 0; i < 1000; ++i) {
    auto gold = random_genes(rng, 1 + rng() % 6);
    const auto pred = random_genes(rng, rng() % 8);
    std::set<std::string> gs, ps;
    for (const auto& g : gold) gs.insert(text::to_lower(g));
    for (const auto& p : pred) ps.insert(text::to_lower(p));
    std::size_t hit = 0;
    for (const auto& g : gs) hit += ps.contains(g);
    const double expect = static_cast<double>(hit) / gs.size();
    const double got = score_answer(TaskType::GeneDiseaseAssociation, text::join(pred, ", "), gold);
    ASSERT_DOUBLE_EQ(got, expect);
    auto more = pred;
    more.push_back(gold[rng() % gold.size()]);
    ASSERT_GE(score_answer(TaskType::GeneDiseaseAssociation, text::join(more, "; "), gold), got);
  }
}

TEST(Score, BoundedAndNormalizationInvariant) {
  std::mt19937 rng(4);
  const std::string alphabet = "chr0123456789:-, .;ABCxyz\"";
  for (int i = 0; i < 3000; ++i) {
    const auto& item = items()[rng() % items().size()];
    std::string p(rng() % 25, ' ');
    for (auto& c : p) c = alphabet[rng() % alphabet.size()];
    if (rng() % 3 == 0) p = item.gold.front();
    for (auto mode : {ScoringMode::strict, ScoringMode::legacy}) {
      const double s = score_answer(item.task, p, item.gold, mode);
      ASSERT_GE(s, 0.0);
      ASSERT_LE(s, 1.0);
      ASSERT_EQ(score_answer(item.task, normalize_answer(item.task, p), item.gold, mode), s) << p;
    }
    if (item.task == TaskType::AlignHuman)
      ASSERT_GE(score_answer(item.task, p, item.gold, ScoringMode::legacy),
                score_answer(item.task, p, item.gold, ScoringMode::strict));
  }
}

TEST(Score, GoldScoresOneForEveryItem) {
  for (const auto& item : items())
    for (const auto& g : item.gold) {
      const auto pred = item.task == TaskType::GeneDiseaseAssociation ? text::join(item.gold, ", ") : g;
      EXPECT_EQ(score_answer(item.task, pred, item.gold), 1.0) << item.id;
    }
}

// ----- dataset ----------------------------------------------------------------

TEST(Dataset, ShippedFileShape) {
  std::map<TaskType, int> per_task;
  std::size_t excluded = 0;
  for (const auto& it : items()) {
    per_task[it.task]++;
    excluded += it.excluded;
    EXPECT_FALSE(it.gold.empty());
    if (it.task == TaskType::AlignHuman && !it.excluded) EXPECT_TRUE(parse_interval(it.gold.front())) << it.id;
  }
  EXPECT_EQ(items().size(), 450u);
  for (auto t : kAllTasks) EXPECT_EQ(per_task[t], 50);
  EXPECT_LE(static_cast<double>(excluded) / items().size(), 0.02);
}

TEST(Dataset, RejectsMissingTasksAndBadSchema) {
  auto j = dataset_to_json(items(), "x");
  EXPECT_EQ(dataset_from_json(j, "rt").size(), items().size());
  json short_j = j;
  short_j["items"] = json::array();
  for (const auto& it : j["items"])
    if (it["task"] != "AlignSpecies") short_j["items"].push_back(it);
  EXPECT_THROW(dataset_from_json(short_j, "x"), TaskCountMismatch);
  EXPECT_NO_THROW(dataset_from_json(short_j, "x", {0, 1.0}));
  EXPECT_THROW(dataset_from_json({{"schema_version", 1}, {"items", 3}}, "x"), SchemaError);
  json too_many = j;
  for (int i = 0; i < 20; ++i) too_many["items"][i]["excluded"] = true;
  EXPECT_THROW(dataset_from_json(too_many, "x"), SchemaError);
}

TEST(Dataset, LegacyLayout) {
  json legacy = {{"Gene alias", {{"What is the official gene symbol of LMP10?", "PSMB10"}}},
                 {"Gene disease association", {{"What are genes related to X?", "A, B"}}}};
  const auto d = dataset_from_json(legacy, "legacy", {0, 0.02});
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].task, TaskType::GeneAlias);
  EXPECT_EQ(d[1].gold, (std::vector<std::string>{"A", "B"}));
}

// ----- pricing ----------------------------------------------------------------

TEST(Pricing, Arithmetic) {
  const auto p = PricingTable::load(kRoot / "config" / "pricing.json");
  UsageMetrics u;
  EXPECT_EQ(estimate_cost(u, "gpt-4o-mini", p), 0.0);
  u.est_tokens_in = 1'000'000;
  EXPECT_NEAR(estimate_cost(u, "gpt-4o-mini", p), 0.15, 1e-15);
  u.est_tokens_out = 500'000;
  EXPECT_NEAR(estimate_cost(u, "gpt-4o-mini", p), 0.45, 1e-15);
  EXPECT_THROW(estimate_cost(u, "qwen2.5-7b", p), UnknownModel);
  EXPECT_THROW(PricingTable::from_json({{"schema_version", 1}, {"models", {{"m", {{"input_price", -1}}}}}}, "x"),
               SchemaError);
}

// ----- report -----------------------------------------------------------------

std::vector<QuestionResult> random_rows(std::mt19937& rng, std::size_t n) {
  std::vector<QuestionResult> rows;
  const std::vector<std::pair<std::string, Method>> groups = {
      {"a", Method::agentic}, {"a", Method::direct}, {"b", Method::genegpt}};
  for (std::size_t i = 0; i < n; ++i) {
    QuestionResult r;
    r.item_index = i;  // unique, as in a real run
    r.item_id = "q" + std::to_string(r.item_index);
    r.task = kAllTasks[rng() % 9];
    std::tie(r.model, r.method) = groups[rng() % groups.size()];
    r.score = (rng() % 3) / 2.0;
    r.usage.est_tokens_in = rng() % 5000;
    r.usage.est_tokens_out = rng() % 500;
    if (r.model == "a") r.cost = r.usage.est_tokens_in * 0.15e-6;
    if (rng() % 10 == 0) r.error_cause = "Timeout";
    rows.push_back(r);
  }
  return rows;
}

TEST(Report, AlgebraHoldsExactlyAgainstRows) {
  std::mt19937 rng(99);
  for (int round = 0; round < 50; ++round) {
    const auto report = build_report(random_rows(rng, 200 + rng() % 100), ScoringMode::strict);
    double dollars = 0;
    for (const auto& r : report.rows) dollars += r.cost.value_or(0);
    EXPECT_NEAR(report.total_dollars, dollars, 1e-9);
    for (const auto& g : report.groups) {
      std::map<TaskType, std::pair<double, int>> acc;
      std::size_t failures = 0;
      for (const auto& r : report.rows)
        if (r.model == g.model && r.method == g.method) {
          acc[r.task].first += r.score;
          acc[r.task].second++;
          failures += !r.error_cause.empty();
        }
      double sum = 0;
      for (const auto& [task, a] : acc) {
        EXPECT_DOUBLE_EQ(g.per_task.at(task), a.first / a.second);
        sum += a.first / a.second;
      }
      EXPECT_NEAR(g.overall, sum / acc.size(), 1e-12);
      EXPECT_EQ(g.failures, failures);
      EXPECT_EQ(g.cost_complete, g.model == "a");
    }
  }
}

TEST(Report, RowOrderIsDeterministic) {
  std::mt19937 rng(5);
  auto rows = random_rows(rng, 300);
  const auto a = build_report(rows, ScoringMode::strict);
  std::shuffle(rows.begin(), rows.end(), rng);
  const auto b = build_report(rows, ScoringMode::strict);
  EXPECT_EQ(per_question_csv(a), per_question_csv(b));
  EXPECT_EQ(per_task_csv(a), per_task_csv(b));
  EXPECT_EQ(heatmap_csv(a), heatmap_csv(b));
  EXPECT_EQ(summary_json(a), summary_json(b));
}

TEST(Report, CsvAndNumbers) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(1), "1");
  for (double v : {0.1, 1.0 / 3, 2.5e-7, 123456.789}) EXPECT_EQ(std::stod(format_number(v)), v);
}

// ----- runner -----------------------------------------------------------------

AnswerRecord gold_answer(const DatasetItem& item, const std::string& model, Method method) {
  AnswerRecord r;
  r.question = item.question;
  r.method = method;
  r.model = model;
  r.task = item.task;
  r.final_answer = item.task == TaskType::GeneDiseaseAssociation ? text::join(item.gold, ", ") : item.gold.front();
  r.canonical_answer = normalize_answer(item.task, r.final_answer);
  StepTrace t;
  t.step_id = "s";
  t.kind = method == Method::code ? StepKind::Transform : StepKind::ModelCall;
  t.parsed_output = r.final_answer;
  t.usage.est_tokens_in = item.question.size();
  t.usage.est_tokens_out = 3;
  r.traces = {t};
  r.recompute_usage();
  return r;
}

TEST(Runner, WorkerCountDoesNotChangeReports) {
  BenchmarkConfig cfg;
  cfg.models = {"gpt-4o-mini", "qwen2.5-7b"};
  cfg.methods = {Method::agentic, Method::code};
  cfg.embedding_model = "mock-embed";
  const auto pricing = PricingTable::load(kRoot / "config" / "pricing.json");
  auto fn = [](const DatasetItem& item, const std::string& model, Method method, std::stop_token) {
    if (item.id.back() == '7') throw Error("boom");  // a per-question failure
    return gold_answer(item, model, method);
  };
  cfg.workers = 1;
  const auto one = run_benchmark(items(), cfg, fn, pricing);
  cfg.workers = 8;
  const auto eight = run_benchmark(items(), cfg, fn, pricing);
  EXPECT_EQ(per_question_csv(one.report), per_question_csv(eight.report));
  EXPECT_EQ(heatmap_csv(one.report), heatmap_csv(eight.report));
  EXPECT_EQ(summary_json(one.report), summary_json(eight.report));

  std::size_t non_excluded = 0;
  for (const auto& it : items()) non_excluded += !it.excluded;
  // Code runs once, under the embedding model's label.
  EXPECT_EQ(one.report.rows.size(), non_excluded * 3);
  ASSERT_NE(one.report.group("mock-embed", Method::code), nullptr);
  EXPECT_EQ(one.report.group("gpt-4o-mini", Method::code), nullptr);
  for (const auto& r : one.report.rows)
    if (!r.error_cause.empty()) {
      EXPECT_EQ(r.score, 0.0);
      EXPECT_EQ(r.item_id.back(), '7');
    } else {
      EXPECT_EQ(r.score, 1.0) << r.item_id;
    }
  // qwen is unpriced: warned once, its costs blank.
  EXPECT_EQ(std::count_if(one.report.warnings.begin(), one.report.warnings.end(),
                          [](const auto& w) { return w.find("UnknownModel") != std::string::npos; }),
            1);
  EXPECT_FALSE(one.report.group("qwen2.5-7b", Method::agentic)->cost_complete);
  EXPECT_GT(one.report.failure_rate(), 0.0);
}

TEST(Runner, ExcludedItemsAreNeverAsked) {
  std::atomic<int> excluded_asked{0};
  BenchmarkConfig cfg;
  cfg.models = {"m"};
  cfg.methods = {Method::direct};
  run_benchmark(
      items(), cfg,
      [&](const DatasetItem& item, const std::string& model, Method method, std::stop_token) {
        excluded_asked += item.excluded;
        return gold_answer(item, model, method);
      },
      {});
  EXPECT_EQ(excluded_asked.load(), 0);
  cfg.workers = 0;
  EXPECT_THROW(run_benchmark(items(), cfg, nullptr, {}), ConfigError);
}

// ----- leakage ----------------------------------------------------------------

TEST(Leakage, ShippedConfigHoldsNoGoldAnswers) {
  const auto report = audit_leakage(items(), {kRoot / "config"});
  EXPECT_TRUE(report.hits.empty()) << report.hits.front().gold << " in " << report.hits.front().file;
  EXPECT_GT(report.files_scanned.size(), 9u);
}

TEST(Leakage, PlantedGoldIsFound) {
  const auto dir = fs::temp_directory_path() / ("nba_leak_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const DatasetItem* sym = nullptr;
  for (const auto& it : items())
    if (it.task == TaskType::GeneAlias) {
      sym = &it;
      break;
    }
  std::ofstream(dir / "prompt.txt") << "Example: the answer is " << sym->gold.front() << ".\n";
  const auto report = audit_leakage(items(), {dir});
  ASSERT_FALSE(report.hits.empty());
  EXPECT_TRUE(text::iequals(report.hits.front().gold, sym->gold.front()));
  EXPECT_TRUE(is_closed_vocabulary(TaskType::GeneLocation, "chr2"));
  EXPECT_FALSE(is_closed_vocabulary(TaskType::GeneAlias, sym->gold.front()));
  fs::remove_all(dir);
}

}  // namespace
}  // namespace nba
