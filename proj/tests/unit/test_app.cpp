#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "nba/app/cli.hpp"
#include "nba/app/commands.hpp"
#include "sandbox_app.hpp"

namespace nba {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::kConfigFile;
using testing::kRoot;

fs::path temp_dir(const std::string& name) {
  auto p = fs::temp_directory_path() / ("nba_app_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

EnvLookup env_of(std::map<std::string, std::string> vars) {
  return [vars](const std::string& k) -> std::optional<std::string> {
    auto it = vars.find(k);
    if (it == vars.end()) return std::nullopt;
    return it->second;
  };
}

struct CliResult {
  int code;
  std::string out, err;
};

CliResult cli(std::vector<std::string> args, const AppDeps& deps = {}, std::map<std::string, std::string> env = {}) {
  args.insert(args.begin(), "nba");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err, deps, env_of(env));
  return {code, out.str(), err.str()};
}

AppDeps mock_deps(testing::SandboxApp& sb) {
  AppDeps d;
  d.clock = sb.clock;
  d.ncbi_transport = std::make_shared<sandbox::MockNcbiTransport>(sb.ncbi);
  d.model_transport = sb.model;
  return d;
}

// ----- configuration --------------------------------------------------------------

TEST(Config, FileThenEnvThenFlags) {
  const auto file_only = resolve_config({}, {}, kConfigFile);
  EXPECT_EQ(file_only.workers, 4u);
  EXPECT_TRUE(file_only.offline);
  EXPECT_EQ(file_only.plan_dir, (kRoot / "config" / "plans").lexically_normal());
  EXPECT_EQ(file_only.dataset, (kRoot / "data" / "geneturing.json").lexically_normal());

  const auto env = env_of({{"NBA_WORKERS", "2"}, {"NBA_SCORING", "legacy"}});
  const auto with_env = resolve_config({}, env, kConfigFile);
  EXPECT_EQ(with_env.workers, 2u);
  EXPECT_EQ(with_env.mode, ScoringMode::legacy);

  const auto with_flags = resolve_config({{"workers", "3"}}, env, kConfigFile);
  EXPECT_EQ(with_flags.workers, 3u);
  EXPECT_EQ(with_flags.mode, ScoringMode::legacy);

  const auto no_file = resolve_config({{"offline", "false"}}, {}, std::nullopt);
  EXPECT_EQ(no_file.methods, std::vector<Method>{Method::agentic});
}

TEST(Config, Validation) {
  EXPECT_THROW(resolve_config({{"fixture_dir", ""}}, {}, kConfigFile), ConfigError);  // offline without fixtures
  EXPECT_THROW(resolve_config({{"workers", "0"}}, {}, kConfigFile), ConfigError);
  EXPECT_THROW(resolve_config({{"workers", "two"}}, {}, kConfigFile), ConfigError);
  EXPECT_THROW(resolve_config({{"offline", "maybe"}}, {}, kConfigFile), ConfigError);
  EXPECT_THROW(resolve_config({{"method", "oracle"}}, {}, kConfigFile), ConfigError);
  EXPECT_THROW(resolve_config({{"failure_threshold", "1.5"}}, {}, kConfigFile), ConfigError);
  EXPECT_THROW(resolve_config({{"colour", "blue"}}, {}, kConfigFile), ConfigError);
  EXPECT_THROW(resolve_config({}, {}, kRoot / "config" / "missing.json"), ConfigError);
  EXPECT_THROW(resolve_config({}, {}, kRoot / "config" / "models.json"), ConfigError);  // wrong schema
}

TEST(App, MissingPiecesAreConfigErrors) {
  EXPECT_THROW(App(testing::sandbox_config({{"plan_dir", "/nonexistent"}})), ConfigError);
  EXPECT_THROW(App(testing::sandbox_config({{"models_file", "/nonexistent.json"}})), ConfigError);
  testing::SandboxApp sb;
  EXPECT_THROW(sb->answer("q", "no-such-model", Method::agentic), ConfigError);
}

// ----- CLI --------------------------------------------------------------------

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
  auto r = cli({"--config", kConfigFile.string(), "--plan-dir", "/nonexistent", "ask", "Which chromosome?"});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
  EXPECT_EQ(cli({"--no-such-flag"}).code, kExitConfig);
  EXPECT_EQ(cli({"--config", kConfigFile.string(), "--offline", "--online", "bench"}).code, kExitConfig);
  EXPECT_EQ(cli({"--config", kConfigFile.string()}).code, kExitConfig);  // no subcommand
}

TEST(Cli, ConfigFromEnvironment) {
  const auto out = temp_dir("envcfg");
  auto r = cli({"--method", "code", "--output-dir", out.string(), "ask", testing::shared_world()->dataset[100].question},
               {}, {{"NBA_CONFIG", kConfigFile.string()}});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("Answer: "), std::string::npos);
  fs::remove_all(out);
}

const DatasetItem& first_of(TaskType task) {
  for (const auto& it : testing::shared_world()->dataset)
    if (it.task == task && !it.excluded) return it;
  throw std::logic_error("no item");
}

// Offline, both transports refuse every request; an answer that comes back
// proves it was served from fixtures and transcripts alone.
TEST(Cli, OfflineAskReplays) {
  const auto out = temp_dir("ask");
  const auto& item = first_of(TaskType::GeneLocation);
  for (const std::string method : {"code", "agentic"}) {
    auto r = cli({"--config", kConfigFile.string(), "--offline", "--method", method, "--output-dir", out.string(),
                  "ask", "--json", item.question});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto rec = answer_record_from_json(json::parse(r.out));
    ASSERT_TRUE(rec.ok()) << *rec.error;
    EXPECT_EQ(rec.canonical_answer.rfind("chr", 0), 0u);
    EXPECT_EQ(rec.canonical_answer, normalize_answer(item.task, item.gold.front()));
  }
  auto traced = cli({"--config", kConfigFile.string(), "--method", "code", "--output-dir", out.string(), "ask",
                     "--trace", item.question});
  EXPECT_NE(traced.out.find("Trace:"), std::string::npos);
  EXPECT_NE(traced.out.find("\"kind\": \"Embedding\""), std::string::npos);
  fs::remove_all(out);
}

TEST(Cli, OfflineBenchIsByteIdenticalAcrossRunsAndWorkers) {
  const auto a = temp_dir("bench_a"), b = temp_dir("bench_b");
  auto ra = cli({"--config", kConfigFile.string(), "--methods", "code,agentic", "--workers", "4", "--output-dir",
                 a.string(), "bench"});
  auto rb = cli({"--config", kConfigFile.string(), "--methods", "code,agentic", "--workers", "1", "--output-dir",
                 b.string(), "bench"});
  ASSERT_EQ(ra.code, kExitOk) << ra.err;
  ASSERT_EQ(rb.code, kExitOk) << rb.err;
  // questions.jsonl is a log and carries wall-clock timings; the reports do not.
  for (const auto* f : {"per_question.csv", "per_task.csv", "heatmap.csv", "summary.json"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  EXPECT_FALSE(slurp(a / "nba.log.jsonl").empty());
  EXPECT_EQ(ra.out, rb.out);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Cli, UnpricedModelWarnsAndLeavesCostBlank) {
  testing::SandboxApp sb;
  const auto out = temp_dir("unpriced");
  auto r = cli({"--config", kConfigFile.string(), "--online", "--fixture-dir", "", "--transcript-dir", "",
                "--methods", "direct", "--models", "qwen2.5-7b", "--failure-threshold", "1", "--output-dir",
                out.string(), "bench"},
               mock_deps(sb));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("warning: UnknownModel"), std::string::npos) << r.out;
  std::istringstream csv(slurp(out / "per_question.csv"));
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  EXPECT_NE(header.find(",cost,error"), std::string::npos);
  EXPECT_NE(row.find(",,"), std::string::npos);  // blank cost
  EXPECT_EQ(sb.ncbi->requests(), 0u);            // direct prompting never calls NCBI
  fs::remove_all(out);
}

TEST(Cli, IndexBuildReproducesShippedIndex) {
  testing::SandboxApp sb;
  const auto dir = temp_dir("index");
  auto r = cli({"--config", kConfigFile.string(), "--online", "--index", (dir / "index.json").string(),
                "--output-dir", dir.string(), "index", "build"},
               mock_deps(sb));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(slurp(dir / "index.json"), slurp(kRoot / "data" / "index.json"));
  fs::remove_all(dir);
}

TEST(Cli, CaptureThenOfflineReplay) {
  testing::SandboxApp sb;
  const auto dir = temp_dir("capture");
  auto r = cli({"--config", kConfigFile.string(), "--online", "--fixture-dir", (dir / "fixtures").string(),
                "--output-dir", dir.string(), "fixtures", "capture", "--limit", "60"},
               mock_deps(sb));
  ASSERT_EQ(r.code, kExitOk) << r.out << r.err;
  EXPECT_NE(r.out.find("captured 60 questions"), std::string::npos) << r.out;
  EXPECT_TRUE(fs::exists(dir / "fixtures" / "manifest.json"));

  // Offline against the fresh store: every captured question replays.
  const auto& ds = testing::shared_world()->dataset;
  for (std::size_t i = 0; i < 60; ++i) {
    if (ds[i].excluded) continue;
    auto q = cli({"--config", kConfigFile.string(), "--offline", "--fixture-dir", (dir / "fixtures").string(),
                  "--method", "code", "--output-dir", dir.string(), "ask", "--json", ds[i].question});
    ASSERT_EQ(q.code, kExitOk) << q.err;
    EXPECT_TRUE(answer_record_from_json(json::parse(q.out)).ok()) << ds[i].id;
  }
  // Capture refuses to run offline.
  EXPECT_EQ(cli({"--config", kConfigFile.string(), "--offline", "fixtures", "capture"}).code, kExitConfig);
  fs::remove_all(dir);
}

TEST(Cli, AuditExitCodes) {
  auto clean = cli({"--config", kConfigFile.string(), "audit"});
  EXPECT_EQ(clean.code, kExitOk) << clean.out;
  EXPECT_NE(clean.out.find("0 hits"), std::string::npos);

  const auto dir = temp_dir("audit");
  const auto& item = first_of(TaskType::GeneAlias);
  std::ofstream(dir / "prompt.txt") << "For instance the answer is " << item.gold.front() << "\n";
  auto dirty = cli({"--config", kConfigFile.string(), "audit", dir.string()});
  EXPECT_EQ(dirty.code, kExitPartialFailure);
  EXPECT_NE(dirty.out.find("LEAK"), std::string::npos);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace nba
