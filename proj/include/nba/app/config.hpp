#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nba/eval/scoring.hpp"
#include "nba/exec/answer.hpp"

namespace nba {

/// Everything a subcommand needs. Resolved from defaults, then the config
/// file, then environment variables, then command-line flags (later wins).
struct RunConfig {
  Method method = Method::agentic;   // ask
  std::vector<Method> methods;       // bench; defaults to {method}
  std::vector<std::string> models;   // chat endpoint names
  std::string embedding_model;
  std::filesystem::path plan_dir;
  std::filesystem::path dataset;
  std::filesystem::path fixture_dir;
  std::filesystem::path transcript_dir;
  std::filesystem::path index;
  std::filesystem::path prompts;
  std::filesystem::path classifier_examples;
  std::filesystem::path tables;
  std::filesystem::path models_file;
  std::filesystem::path pricing;
  std::filesystem::path output_dir;
  bool offline = false;
  /// Record model responses into transcript_dir (networked runs only).
  bool record_transcripts = false;
  ScoringMode mode = ScoringMode::strict;
  std::size_t workers = 4;
  double failure_threshold = 0.25;
  std::string api_key;  // NCBI
  std::string eutils_base;
  std::string blast_base;
  std::optional<std::size_t> rate_cap;
  std::int64_t poll_interval_ms = 10'000;

  /// Throws ConfigError: offline without a fixture dir, zero workers,
  /// failure threshold outside [0, 1].
  void validate() const;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
EnvLookup process_env();

/// Environment variable for each settable key.
const std::map<std::string, std::string>& env_names();

/// `flags` and the file use the same keys (plan_dir, dataset, fixture_dir,
/// offline, workers, ...). Relative paths in the file resolve against the
/// file's directory; flags and environment against the working directory.
/// Throws ConfigError on unknown keys or malformed values.
RunConfig resolve_config(const std::map<std::string, std::string>& flags, const EnvLookup& env,
                         const std::optional<std::filesystem::path>& file);

}  // namespace nba
