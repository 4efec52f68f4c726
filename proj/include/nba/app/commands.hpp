#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "nba/app/app.hpp"
#include "nba/eval/runner.hpp"

namespace nba {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitPartialFailure = 2;

struct AskOptions {
  std::string question;
  std::optional<std::string> model;
  bool trace = false;
  bool json = false;
};

/// Prints the answer (and the step trace with --trace). A failed answer is
/// reported, not an exit error.
int cmd_ask(App& app, const AskOptions& options, std::ostream& out);

/// Runs every (model, method, item) combination, writes reports to the
/// output directory and prints the per-task table. Returns
/// kExitPartialFailure when the failure rate exceeds the threshold.
int cmd_bench(App& app, std::ostream& out, BenchmarkRun* result = nullptr);

/// Embeds every dataset question and saves the index to config().index.
int cmd_index_build(App& app, std::ostream& out);

/// Walks every plan over every dataset question with the deterministic
/// handlers so each NCBI request lands in the fixture store. Requests
/// already stored are skipped, so an interrupted capture resumes.
/// `limit` caps the number of items (0 = all).
int cmd_fixtures_capture(App& app, std::ostream& out, std::size_t limit = 0);

/// Scans prompt, plan and config files for gold answers. Returns
/// kExitPartialFailure on any hit.
int cmd_audit(App& app, const std::vector<std::filesystem::path>& roots, std::ostream& out);

}  // namespace nba
