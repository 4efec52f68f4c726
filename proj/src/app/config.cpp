#include "nba/app/config.hpp"

#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nba/common/error.hpp"
#include "nba/common/text.hpp"

namespace nba {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool parse_bool(const std::string& key, const std::string& v) {
  const auto s = text::to_lower(text::trim(v));
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off" || s.empty()) return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const auto n = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
}

std::vector<std::string> parse_list(const std::string& v) {
  std::vector<std::string> out;
  for (auto& s : text::split_any(v, ",")) {
    auto t = text::trim(s);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

Method parse_method(const std::string& v) {
  auto m = method_from_string(text::trim(v));
  if (!m) throw ConfigError("unknown method '" + v + "' (agentic, code, direct, genegpt)");
  return *m;
}

fs::path resolve_path(const std::string& v, const fs::path& base) {
  if (v.empty()) return {};
  fs::path p(v);
  return p.is_absolute() || base.empty() ? p : (base / p).lexically_normal();
}

void apply(RunConfig& c, const std::string& key, const std::string& v, const fs::path& base) {
  if (key == "method") c.method = parse_method(v);
  else if (key == "methods") {
    c.methods.clear();
    for (const auto& m : parse_list(v)) c.methods.push_back(parse_method(m));
  } else if (key == "models") c.models = parse_list(v);
  else if (key == "embedding_model") c.embedding_model = text::trim(v);
  else if (key == "plan_dir") c.plan_dir = resolve_path(v, base);
  else if (key == "dataset") c.dataset = resolve_path(v, base);
  else if (key == "fixture_dir") c.fixture_dir = resolve_path(v, base);
  else if (key == "transcript_dir") c.transcript_dir = resolve_path(v, base);
  else if (key == "index") c.index = resolve_path(v, base);
  else if (key == "prompts") c.prompts = resolve_path(v, base);
  else if (key == "classifier_examples") c.classifier_examples = resolve_path(v, base);
  else if (key == "tables") c.tables = resolve_path(v, base);
  else if (key == "models_file") c.models_file = resolve_path(v, base);
  else if (key == "pricing") c.pricing = resolve_path(v, base);
  else if (key == "output_dir") c.output_dir = resolve_path(v, base);
  else if (key == "offline") c.offline = parse_bool(key, v);
  else if (key == "record_transcripts") c.record_transcripts = parse_bool(key, v);
  else if (key == "scoring") {
    auto m = scoring_mode_from_string(text::trim(v));
    if (!m) throw ConfigError("unknown scoring mode '" + v + "' (strict, legacy)");
    c.mode = *m;
  } else if (key == "workers") {
    const auto n = parse_int(key, v);
    if (n < 1) throw ConfigError("workers must be at least 1");
    c.workers = static_cast<std::size_t>(n);
  } else if (key == "failure_threshold") {
    try {
      c.failure_threshold = std::stod(v);
    } catch (const std::exception&) {
      throw ConfigError("failure_threshold: expected a number, got '" + v + "'");
    }
  } else if (key == "ncbi_api_key") c.api_key = text::trim(v);
  else if (key == "eutils_base") c.eutils_base = text::trim(v);
  else if (key == "blast_base") c.blast_base = text::trim(v);
  else if (key == "rate_cap") {
    const auto n = parse_int(key, v);
    if (n < 1) throw ConfigError("rate_cap must be at least 1");
    c.rate_cap = static_cast<std::size_t>(n);
  } else if (key == "poll_interval_ms") c.poll_interval_ms = parse_int(key, v);
  else throw ConfigError("unknown setting '" + key + "'");
}

std::string json_value_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_array()) {
    std::vector<std::string> parts;
    for (const auto& e : v) parts.push_back(json_value_text(e));
    return text::join(parts, ",");
  }
  if (v.is_null()) return {};
  return v.dump();
}

}  // namespace

void RunConfig::validate() const {
  if (offline && fixture_dir.empty()) throw ConfigError("offline mode needs a fixture directory");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (!(failure_threshold >= 0.0 && failure_threshold <= 1.0))
    throw ConfigError("failure_threshold must lie in [0, 1]");
  if (poll_interval_ms < 0) throw ConfigError("poll_interval_ms must not be negative");
}

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
  };
}

const std::map<std::string, std::string>& env_names() {
  static const std::map<std::string, std::string> names = {
      {"method", "NBA_METHOD"},
      {"methods", "NBA_METHODS"},
      {"models", "NBA_MODELS"},
      {"embedding_model", "NBA_EMBEDDING_MODEL"},
      {"plan_dir", "NBA_PLAN_DIR"},
      {"dataset", "NBA_DATASET"},
      {"fixture_dir", "NBA_FIXTURE_DIR"},
      {"transcript_dir", "NBA_TRANSCRIPT_DIR"},
      {"index", "NBA_INDEX"},
      {"prompts", "NBA_PROMPTS"},
      {"classifier_examples", "NBA_CLASSIFIER_EXAMPLES"},
      {"tables", "NBA_TABLES"},
      {"models_file", "NBA_MODELS_FILE"},
      {"pricing", "NBA_PRICING"},
      {"output_dir", "NBA_OUTPUT_DIR"},
      {"offline", "NBA_OFFLINE"},
      {"record_transcripts", "NBA_RECORD_TRANSCRIPTS"},
      {"scoring", "NBA_SCORING"},
      {"workers", "NBA_WORKERS"},
      {"failure_threshold", "NBA_FAILURE_THRESHOLD"},
      {"ncbi_api_key", "NCBI_API_KEY"},
      {"eutils_base", "NBA_EUTILS_BASE"},
      {"blast_base", "NBA_BLAST_BASE"},
      {"rate_cap", "NBA_RATE_CAP"},
      {"poll_interval_ms", "NBA_POLL_INTERVAL_MS"},
  };
  return names;
}

RunConfig resolve_config(const std::map<std::string, std::string>& flags, const EnvLookup& env,
                         const std::optional<fs::path>& file) {
  RunConfig c;
  if (file) {
    std::ifstream in(*file);
    if (!in) throw ConfigError("cannot open config file " + file->string());
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError(file->string() + ": " + e.what());
    }
    if (!j.is_object() || j.value("schema_version", 0) != 1)
      throw ConfigError(file->string() + ": unsupported config schema");
    const auto base = fs::absolute(*file).parent_path();
    for (const auto& [k, v] : j.items()) {
      if (k == "schema_version") continue;
      apply(c, k, json_value_text(v), base);
    }
  }
  if (env)
    for (const auto& [key, var] : env_names())
      if (auto v = env(var)) apply(c, key, *v, {});
  for (const auto& [k, v] : flags) apply(c, k, v, {});
  if (c.methods.empty()) c.methods = {c.method};
  c.validate();
  return c;
}

}  // namespace nba
