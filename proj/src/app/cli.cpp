#include "nba/app/cli.hpp"

#include <CLI11.hpp>

#include "nba/app/commands.hpp"

namespace nba {

namespace fs = std::filesystem;

namespace {

struct Flag {
  std::string key;
  std::string value;
  CLI::Option* option = nullptr;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const AppDeps& deps,
            const EnvLookup& env) {
  CLI::App cli{"Answer genomics questions with small language models and NCBI tools."};
  cli.require_subcommand(1);
  std::string config_file;
  cli.add_option("--config", config_file, "JSON config file (default: $NBA_CONFIG)");

  std::vector<Flag> flags;
  const std::vector<std::tuple<std::string, std::string, std::string>> specs = {
      {"--method", "method", "agentic | code | direct | genegpt"},
      {"--methods", "methods", "comma-separated methods for bench"},
      {"--models,--model", "models", "comma-separated chat endpoint names"},
      {"--embedding-model", "embedding_model", "embedding endpoint name"},
      {"--plan-dir", "plan_dir", "directory of plan JSON files"},
      {"--dataset", "dataset", "GeneTuring dataset file"},
      {"--fixture-dir", "fixture_dir", "NCBI fixture store"},
      {"--transcript-dir", "transcript_dir", "model transcript directory"},
      {"--index", "index", "embedding index file"},
      {"--prompts", "prompts", "prompt file"},
      {"--classifier-examples", "classifier_examples", "classifier example file"},
      {"--tables", "tables", "lookup table file"},
      {"--models-file", "models_file", "model endpoint catalog"},
      {"--pricing", "pricing", "pricing table"},
      {"--output-dir", "output_dir", "report and log directory"},
      {"--scoring", "scoring", "strict | legacy"},
      {"--workers", "workers", "concurrent questions"},
      {"--failure-threshold", "failure_threshold", "bench exits 2 above this failure rate"},
      {"--eutils-base", "eutils_base", "E-utilities base URL"},
      {"--blast-base", "blast_base", "BLAST URL API endpoint"},
      {"--rate-cap", "rate_cap", "NCBI requests per second"},
      {"--poll-interval-ms", "poll_interval_ms", "BLAST poll interval"},
  };
  flags.reserve(specs.size());  // options hold pointers into flags
  for (const auto& [name, key, help] : specs) {
    flags.push_back({key, {}, nullptr});
    flags.back().option = cli.add_option(name, flags.back().value, help);
  }
  bool offline = false, online = false, record = false;
  cli.add_flag("--offline", offline, "replay fixtures and transcripts; never open a socket");
  cli.add_flag("--online", online, "allow network access even if the config says offline");
  cli.add_flag("--record-transcripts", record, "record model responses for later offline replay");

  AskOptions ask;
  auto* ask_cmd = cli.add_subcommand("ask", "answer one question");
  ask_cmd->add_option("question", ask.question, "the question")->required();
  ask_cmd->add_flag("--trace", ask.trace, "print every step");
  ask_cmd->add_flag("--json", ask.json, "print the full answer record as JSON");

  auto* bench_cmd = cli.add_subcommand("bench", "score methods and models on the dataset");

  auto* index_cmd = cli.add_subcommand("index", "embedding index");
  index_cmd->require_subcommand(1);
  auto* index_build = index_cmd->add_subcommand("build", "embed every dataset question");

  std::size_t limit = 0;
  auto* fixtures_cmd = cli.add_subcommand("fixtures", "NCBI fixture store");
  fixtures_cmd->require_subcommand(1);
  auto* capture_cmd = fixtures_cmd->add_subcommand("capture", "record every NCBI response the plans need");
  capture_cmd->add_option("--limit", limit, "only the first N questions");

  std::vector<std::string> audit_paths;
  auto* audit_cmd = cli.add_subcommand("audit", "scan prompts, plans and config for gold answers");
  audit_cmd->add_option("paths", audit_paths, "files or directories (default: the config directory)");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    std::map<std::string, std::string> settings;
    for (const auto& f : flags)
      if (f.option->count() > 0) settings[f.key] = f.value;
    if (offline && online) throw ConfigError("--offline and --online are mutually exclusive");
    if (offline) settings["offline"] = "true";
    if (online) settings["offline"] = "false";
    if (record) settings["record_transcripts"] = "true";

    std::optional<fs::path> file;
    if (!config_file.empty())
      file = config_file;
    else if (auto v = env ? env("NBA_CONFIG") : std::nullopt; v && !v->empty())
      file = *v;

    const auto config = resolve_config(settings, env, file);
    AppDeps d = deps;
    if (!d.log && !config.output_dir.empty()) {
      fs::create_directories(config.output_dir);
      d.log = std::make_shared<JsonLinesLogSink>(config.output_dir / "nba.log.jsonl");
    }
    if (capture_cmd->parsed()) d.capture = true;
    App app(config, d);

    if (ask_cmd->parsed()) return cmd_ask(app, ask, out);
    if (bench_cmd->parsed()) return cmd_bench(app, out);
    if (index_build->parsed()) return cmd_index_build(app, out);
    if (capture_cmd->parsed()) return cmd_fixtures_capture(app, out, limit);
    if (audit_cmd->parsed()) {
      std::vector<fs::path> roots(audit_paths.begin(), audit_paths.end());
      if (roots.empty()) {
        if (!file) throw ConfigError("audit needs paths or a config file");
        roots.push_back(fs::absolute(*file).parent_path());
      }
      return cmd_audit(app, roots, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace nba
