#include "nba/plans/task_type.hpp"

#include <string>

#include "nba/common/error.hpp"
#include "nba/common/text.hpp"

namespace nba {

namespace {

struct TaskInfo {
  TaskType type;
  std::string_view name;
  std::string_view display;  // GeneTuring spelling, typos included
  TaskArea area;
  AnswerKind answer;
};

constexpr std::array<TaskInfo, 9> kInfo = {{
    {TaskType::GeneAlias, "GeneAlias", "Gene alias", TaskArea::Nomenclature, AnswerKind::Symbol},
    {TaskType::GeneNameConversion, "GeneNameConversion", "Gene name conversion", TaskArea::Nomenclature,
     AnswerKind::Symbol},
    {TaskType::GeneLocation, "GeneLocation", "Gene location", TaskArea::GenomicLocation,
     AnswerKind::Chromosome},
    {TaskType::SnpLocation, "SnpLocation", "SNP location", TaskArea::GenomicLocation, AnswerKind::Chromosome},
    {TaskType::GeneSnpAssociation, "GeneSnpAssociation", "Gene SNP association", TaskArea::GenomicLocation,
     AnswerKind::Symbol},
    {TaskType::GeneDiseaseAssociation, "GeneDiseaseAssociation", "Gene disease association",
     TaskArea::FunctionalAnalysis, AnswerKind::GeneList},
    {TaskType::ProteinCodingGenes, "ProteinCodingGenes", "Protein-coding genes", TaskArea::FunctionalAnalysis,
     AnswerKind::Boolean},
    {TaskType::AlignHuman, "AlignHuman", "Human genome DNA aligment", TaskArea::SequenceAlignment,
     AnswerKind::Coordinates},
    {TaskType::AlignSpecies, "AlignSpecies", "Multi-species DNA aligment", TaskArea::SequenceAlignment,
     AnswerKind::Species},
}};

const TaskInfo& info(TaskType t) {
  if (t == TaskType::Unknown) throw PreconditionError("task type Unknown has no metadata");
  return kInfo[static_cast<std::size_t>(t)];
}

}  // namespace

std::string_view to_string(TaskType t) {
  if (t == TaskType::Unknown) return "Unknown";
  return info(t).name;
}

std::string_view to_string(TaskArea a) {
  switch (a) {
    case TaskArea::Nomenclature: return "Nomenclature";
    case TaskArea::GenomicLocation: return "GenomicLocation";
    case TaskArea::FunctionalAnalysis: return "FunctionalAnalysis";
    case TaskArea::SequenceAlignment: return "SequenceAlignment";
  }
  return "?";
}

std::optional<TaskType> task_from_string(std::string_view s) {
  const std::string needle = text::trim(s);
  if (text::iequals(needle, "Unknown")) return TaskType::Unknown;
  for (const auto& i : kInfo) {
    if (text::iequals(needle, i.name) || text::iequals(needle, i.display)) return i.type;
  }
  // "alignment" spelled correctly is accepted too.
  if (text::iequals(needle, "Human genome DNA alignment")) return TaskType::AlignHuman;
  if (text::iequals(needle, "Multi-species DNA alignment")) return TaskType::AlignSpecies;
  return std::nullopt;
}

TaskArea area_of(TaskType t) { return info(t).area; }

AnswerKind answer_kind(TaskType t) { return info(t).answer; }

std::size_t task_index(TaskType t) { return static_cast<std::size_t>(t); }

}  // namespace nba
