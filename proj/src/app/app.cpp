#include "nba/app/app.hpp"

#include <fstream>

#include "nba/common/text.hpp"

namespace nba {

namespace fs = std::filesystem;
using nlohmann::json;

ModelCatalog ModelCatalog::from_json(const json& j, const std::string& origin) {
  if (!j.is_object() || j.value("schema_version", 0) != 1) throw ConfigError(origin + ": unsupported models schema");
  ModelCatalog c;
  try {
    for (const auto& [name, e] : j.at("endpoints").items()) c.endpoints.emplace(name, endpoint_from_json(name, e));
    c.default_chat = j.value("default_chat", "");
    c.default_embedding = j.value("default_embedding", "");
  } catch (const json::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  for (const auto* name : {&c.default_chat, &c.default_embedding})
    if (!name->empty() && !c.endpoints.contains(*name))
      throw ConfigError(origin + ": default endpoint '" + *name + "' is not defined");
  return c;
}

ModelCatalog ModelCatalog::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open models file " + path.string());
  try {
    return from_json(json::parse(in), path.string());
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

const ModelEndpoint& ModelCatalog::get(const std::string& name) const {
  auto it = endpoints.find(name);
  if (it == endpoints.end()) throw ConfigError("no model endpoint named '" + name + "'");
  return it->second;
}

namespace {

constexpr const char* kTranscriptFile = "transcript.json";

Transcript load_transcripts(const fs::path& dir) {
  Transcript t;
  if (dir.empty() || !fs::is_directory(dir)) return t;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) t.merge(Transcript::load(f));
  return t;
}

}  // namespace

App::App(RunConfig config, AppDeps deps) : config_(std::move(config)) {
  config_.validate();
  clock_ = deps.clock ? deps.clock : std::make_shared<SystemClock>();
  log_ = deps.log ? deps.log : std::make_shared<NullLogSink>();

  if (config_.models_file.empty()) throw ConfigError("no models file configured");
  catalog_ = ModelCatalog::load(config_.models_file);
  if (config_.plan_dir.empty() || !fs::is_directory(config_.plan_dir))
    throw ConfigError("plan directory not found: " + config_.plan_dir.string());
  plans_ = std::make_shared<const PlanRegistry>(PlanRegistry::load_directory(config_.plan_dir, builtin_tool_registry()));
  tables_ = std::make_shared<const LookupTables>(config_.tables.empty() ? LookupTables{}
                                                                         : LookupTables::load(config_.tables));
  if (!config_.prompts.empty()) prompts_ = std::make_shared<const PromptSet>(PromptSet::load(config_.prompts));
  if (!config_.classifier_examples.empty())
    examples_ = std::make_shared<const ClassifierExamples>(ClassifierExamples::load(config_.classifier_examples));

  std::shared_ptr<HttpTransport> ncbi;
  if (config_.offline)
    ncbi = std::make_shared<OfflineTransport>();
  else
    ncbi = deps.ncbi_transport ? deps.ncbi_transport : std::make_shared<HttplibTransport>();
  ncbi_transport_ = std::make_shared<CountingTransport>(ncbi);

  if (!config_.fixture_dir.empty()) {
    if (config_.offline && !fs::is_directory(config_.fixture_dir))
      throw ConfigError("fixture directory not found: " + config_.fixture_dir.string());
    fixtures_ = std::make_shared<FixtureStore>(config_.fixture_dir);
  }
  if (deps.capture && !fixtures_) throw ConfigError("fixture capture needs a fixture directory");

  ToolboxConfig tc;
  if (!config_.eutils_base.empty()) tc.eutils_base = config_.eutils_base;
  if (!config_.blast_base.empty()) tc.blast_base = config_.blast_base;
  tc.api_key = config_.api_key;
  tc.rate_cap = config_.rate_cap;
  tc.poll_interval = Millis(config_.poll_interval_ms);
  tc.offline = config_.offline;
  tc.capture = deps.capture;
  toolbox_ = std::make_shared<NcbiToolbox>(tc, ncbi_transport_, clock_, fixtures_, log_);

  transcript_ = std::make_shared<Transcript>(load_transcripts(config_.transcript_dir));
  std::shared_ptr<HttpTransport> model;
  if (config_.offline) {
    model_transport_ = std::make_shared<CountingTransport>(std::make_shared<OfflineTransport>());
    model = std::make_shared<TranscriptReplayTransport>(transcript_);
  } else {
    model_transport_ = std::make_shared<CountingTransport>(deps.model_transport ? deps.model_transport
                                                                                : std::make_shared<HttplibTransport>());
    model = model_transport_;
    if (config_.record_transcripts) model = std::make_shared<TranscriptRecordingTransport>(model, transcript_);
  }
  gateway_ = std::make_shared<ModelGateway>(model, clock_, RetryPolicy{}, log_);
}

const std::vector<DatasetItem>& App::dataset() {
  std::lock_guard lock(mu_);
  if (!dataset_) {
    if (config_.dataset.empty()) throw ConfigError("no dataset configured");
    dataset_ = load_dataset(config_.dataset);
  }
  return *dataset_;
}

std::string App::default_model() const {
  if (!config_.models.empty()) return config_.models.front();
  if (!catalog_.default_chat.empty()) return catalog_.default_chat;
  throw ConfigError("no chat model configured");
}

std::string App::embedding_model() const {
  if (!config_.embedding_model.empty()) return config_.embedding_model;
  if (!catalog_.default_embedding.empty()) return catalog_.default_embedding;
  throw ConfigError("no embedding model configured");
}

HandlerTable App::tool_handlers() const { return make_tool_handlers(toolbox_, tables_); }

std::shared_ptr<const CodeResolver> App::code_resolver() {
  std::lock_guard lock(mu_);
  if (!code_loaded_) {
    code_loaded_ = true;
    if (!config_.index.empty() && fs::exists(config_.index)) {
      CodeResolverDeps d;
      d.plans = plans_;
      d.tools = tool_handlers();
      d.index = std::make_shared<const EmbeddingIndex>(load_index(config_.index));
      d.gateway = gateway_;
      d.embedding = catalog_.get(embedding_model());
      d.clock = clock_;
      d.log = log_;
      code_ = std::make_shared<const CodeResolver>(std::move(d));
    }
  }
  return code_;
}

const Agent& App::agent(const std::string& model) {
  auto code = code_resolver();
  std::lock_guard lock(mu_);
  if (auto it = agents_.find(model); it != agents_.end()) return *it->second;
  if (!prompts_) throw ConfigError("model-driven methods need a prompts file");
  if (!examples_) throw ConfigError("model-driven methods need classifier examples");
  AgentDeps d;
  d.plans = plans_;
  d.tools = tool_handlers();
  d.gateway = gateway_;
  d.chat = catalog_.get(model);
  d.prompts = prompts_;
  d.examples = examples_;
  d.code = code;
  d.toolbox = toolbox_;
  d.clock = clock_;
  d.log = log_;
  return *agents_.emplace(model, std::make_unique<Agent>(std::move(d))).first->second;
}

AnswerRecord App::answer(const std::string& question, const std::string& model, Method method,
                         std::stop_token stop) {
  if (method == Method::code) {
    auto code = code_resolver();
    if (!code) throw ConfigError("method=code needs an embedding index (run `nba index build`)");
    return code->resolve(question, stop);
  }
  return agent(model).answer_question(question, method, stop);
}

ExecutionResult App::run_plan_deterministic(const std::string& question, TaskType task, std::stop_token stop) {
  HandlerTable handlers = tool_handlers();
  handlers.merge(make_code_model_handlers(task));
  ExecOptions opts{clock_, Millis(120'000), log_, stop, {}};
  return execute_plan(plans_->retrieve_plan(task), question, handlers, opts);
}

EmbeddingIndex App::build_index() {
  std::vector<LabeledQuestion> questions;
  for (const auto& item : dataset()) questions.push_back({item.question, item.task});
  return nba::build_index(questions, *gateway_, catalog_.get(embedding_model()));
}

std::size_t App::ncbi_network_requests() const { return ncbi_transport_->count(); }
std::size_t App::model_network_requests() const { return model_transport_->count(); }

void App::finish() {
  if (fixtures_) fixtures_->flush();
  if (config_.record_transcripts && !config_.offline) {
    if (config_.transcript_dir.empty()) throw ConfigError("recording transcripts needs a transcript directory");
    fs::create_directories(config_.transcript_dir);
    transcript_->save(config_.transcript_dir / kTranscriptFile);
  }
}

}  // namespace nba
