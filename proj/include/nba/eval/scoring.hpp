#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nba/plans/task_type.hpp"

namespace nba {

/// strict: alignment needs chromosome and both positions; legacy: a
/// correct chromosome alone earns 0.5.
enum class ScoringMode { strict, legacy };

std::string_view to_string(ScoringMode m);
std::optional<ScoringMode> scoring_mode_from_string(std::string_view s);

/// Score in [0, 1]. Prediction and gold are normalized here, so callers
/// may pass raw strings. Exact-match tasks: 1 iff the prediction is one of
/// the gold answers. GeneDiseaseAssociation: recall of the gold gene set.
/// AlignHuman: coordinate match per `mode` (best over gold entries).
double score_answer(TaskType task, std::string_view prediction, const std::vector<std::string>& gold,
                    ScoringMode mode = ScoringMode::strict);

struct GenomicInterval {
  std::string chromosome;  // "chr8"
  std::int64_t start = 0;
  std::int64_t end = 0;
};
/// "chr8:100-200" after normalization; nullopt when not of that shape.
std::optional<GenomicInterval> parse_interval(std::string_view s);

}  // namespace nba
