#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "nba/gateway/usage.hpp"
#include "nba/plans/plan.hpp"

namespace nba {

/// Record of one step, one network or model interaction.
/// Invariant: parsed_output is empty exactly when error is set.
struct StepTrace {
  std::string step_id;
  StepKind kind = StepKind::ToolCall;
  std::string target;
  std::map<std::string, std::string> rendered_inputs;
  std::string raw_output;
  std::string parsed_output;
  UsageMetrics usage;
  std::int64_t started_at = 0;  // wall ms
  std::int64_t ended_at = 0;
  std::optional<std::string> error;
  std::string note;  // validator remarks, cache provenance

  bool ok() const { return !error.has_value(); }
  bool operator==(const StepTrace&) const = default;
};

nlohmann::json to_json(const StepTrace& t);
StepTrace step_trace_from_json(const nlohmann::json& j);

/// Component-wise sum of the traces' usage.
UsageMetrics sum_usage(const std::vector<StepTrace>& traces);

}  // namespace nba
