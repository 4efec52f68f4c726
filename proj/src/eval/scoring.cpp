#include "nba/eval/scoring.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "nba/common/text.hpp"
#include "nba/exec/answer.hpp"

namespace nba {

std::string_view to_string(ScoringMode m) { return m == ScoringMode::strict ? "strict" : "legacy"; }

std::optional<ScoringMode> scoring_mode_from_string(std::string_view s) {
  const auto l = text::to_lower(text::trim(s));
  if (l == "strict") return ScoringMode::strict;
  if (l == "legacy") return ScoringMode::legacy;
  return std::nullopt;
}

std::optional<GenomicInterval> parse_interval(std::string_view s) {
  static const std::regex re(R"(^(chr[0-9a-z]+):([0-9]+)-([0-9]+)$)");
  const auto n = normalize_answer(AnswerKind::Coordinates, s);
  std::smatch m;
  if (!std::regex_match(n, m, re)) return std::nullopt;
  return GenomicInterval{m[1].str(), std::stoll(m[2].str()), std::stoll(m[3].str())};
}

namespace {

std::string chromosome_part(std::string_view s) {
  const auto n = normalize_answer(AnswerKind::Coordinates, s);
  return n.substr(0, n.find(':'));
}

double score_alignment(std::string_view prediction, const std::vector<std::string>& gold, ScoringMode mode) {
  const auto pred = parse_interval(prediction);
  const auto pred_chr = chromosome_part(prediction);
  double best = 0;
  for (const auto& g : gold) {
    const auto gi = parse_interval(g);
    if (pred && gi && pred->chromosome == gi->chromosome && pred->start == gi->start && pred->end == gi->end)
      return 1.0;
    const auto gold_chr = gi ? gi->chromosome : chromosome_part(g);
    if (mode == ScoringMode::legacy && !pred_chr.empty() && pred_chr != "chr" && pred_chr == gold_chr)
      best = std::max(best, 0.5);
  }
  return best;
}

double score_recall(std::string_view prediction, const std::vector<std::string>& gold) {
  std::set<std::string> gold_set;
  for (const auto& g : gold)
    for (auto& s : split_gene_list(g)) gold_set.insert(s);
  if (gold_set.empty()) return 0.0;
  std::size_t hit = 0;
  for (const auto& p : split_gene_list(prediction)) hit += gold_set.count(p);
  return static_cast<double>(hit) / static_cast<double>(gold_set.size());
}

}  // namespace

double score_answer(TaskType task, std::string_view prediction, const std::vector<std::string>& gold,
                    ScoringMode mode) {
  if (task == TaskType::Unknown || text::trim(prediction).empty() || gold.empty()) return 0.0;
  switch (task) {
    case TaskType::GeneDiseaseAssociation:
      return score_recall(prediction, gold);
    case TaskType::AlignHuman:
      return score_alignment(prediction, gold, mode);
    default: {
      const auto p = normalize_answer(task, prediction);
      if (p.empty()) return 0.0;
      for (const auto& g : gold)
        if (normalize_answer(task, g) == p) return 1.0;
      return 0.0;
    }
  }
}

}  // namespace nba
