#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "nba/agent/agent.hpp"
#include "nba/app/config.hpp"
#include "nba/code/resolver.hpp"
#include "nba/eval/dataset.hpp"
#include "nba/exec/tools.hpp"
#include "nba/gateway/transcript.hpp"
#include "nba/ncbi/toolbox.hpp"

namespace nba {

/// config/models.json:
///
///   {"schema_version": 1, "default_chat": "...", "default_embedding": "...",
///    "endpoints": {"<name>": {"base_url", "model_id", "auth_env", ...}}}
struct ModelCatalog {
  std::map<std::string, ModelEndpoint> endpoints;
  std::string default_chat;
  std::string default_embedding;

  static ModelCatalog from_json(const nlohmann::json& j, const std::string& origin);
  static ModelCatalog load(const std::filesystem::path& path);
  /// Throws ConfigError for an unknown name.
  const ModelEndpoint& get(const std::string& name) const;
};

/// Seams for tests and the sandbox. Null members get the production
/// default: SystemClock, real HTTP (or a refusing transport when offline).
struct AppDeps {
  std::shared_ptr<Clock> clock;
  std::shared_ptr<HttpTransport> ncbi_transport;
  std::shared_ptr<HttpTransport> model_transport;
  std::shared_ptr<LogSink> log;
  /// Record network responses into the fixture store.
  bool capture = false;
};

/// Wires a RunConfig into a toolbox, a gateway, plans, prompts and the
/// resolvers. Offline, both transports refuse every request and model
/// calls replay from transcripts, so no socket is ever opened.
class App {
 public:
  explicit App(RunConfig config, AppDeps deps = {});

  const RunConfig& config() const { return config_; }
  const ModelCatalog& catalog() const { return catalog_; }
  std::shared_ptr<NcbiToolbox> toolbox() const { return toolbox_; }
  std::shared_ptr<ModelGateway> gateway() const { return gateway_; }
  std::shared_ptr<const PlanRegistry> plans() const { return plans_; }
  std::shared_ptr<Clock> clock() const { return clock_; }
  std::shared_ptr<LogSink> log() const { return log_; }

  /// Loaded on first use. Throws ConfigError without a dataset path.
  const std::vector<DatasetItem>& dataset();
  /// Chat endpoint used when none is named: first configured model, then
  /// the catalog default.
  std::string default_model() const;
  std::string embedding_model() const;

  AnswerRecord answer(const std::string& question, const std::string& model, Method method,
                      std::stop_token stop = {});
  /// Runs the task's plan with the deterministic handlers (no model, no
  /// index); used to walk every request a question needs.
  ExecutionResult run_plan_deterministic(const std::string& question, TaskType task, std::stop_token stop = {});

  /// Embeds every dataset question into a fresh index.
  EmbeddingIndex build_index();

  /// Requests that reached the network seam (not cache, fixtures or transcripts).
  std::size_t ncbi_network_requests() const;
  std::size_t model_network_requests() const;

  /// Flushes the fixture manifest and, when recording, writes transcripts.
  void finish();

 private:
  const Agent& agent(const std::string& model);
  std::shared_ptr<const CodeResolver> code_resolver();
  HandlerTable tool_handlers() const;

  RunConfig config_;
  std::shared_ptr<Clock> clock_;
  std::shared_ptr<LogSink> log_;
  ModelCatalog catalog_;
  std::shared_ptr<CountingTransport> ncbi_transport_;
  std::shared_ptr<CountingTransport> model_transport_;
  std::shared_ptr<FixtureStore> fixtures_;
  std::shared_ptr<NcbiToolbox> toolbox_;
  std::shared_ptr<Transcript> transcript_;
  std::shared_ptr<ModelGateway> gateway_;
  std::shared_ptr<const PlanRegistry> plans_;
  std::shared_ptr<const LookupTables> tables_;
  std::shared_ptr<const PromptSet> prompts_;
  std::shared_ptr<const ClassifierExamples> examples_;

  std::mutex mu_;
  std::optional<std::vector<DatasetItem>> dataset_;
  std::shared_ptr<const CodeResolver> code_;
  bool code_loaded_ = false;
  std::map<std::string, std::unique_ptr<Agent>> agents_;
};

}  // namespace nba
