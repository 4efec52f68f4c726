#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace nba {

/// The nine GeneTuring task categories.
enum class TaskType {
  GeneAlias,
  GeneNameConversion,
  GeneLocation,
  SnpLocation,
  GeneSnpAssociation,
  GeneDiseaseAssociation,
  ProteinCodingGenes,
  AlignHuman,
  AlignSpecies,
  Unknown,
};

enum class TaskArea { Nomenclature, GenomicLocation, FunctionalAnalysis, SequenceAlignment };

/// Shape of a task's canonical answer; drives normalization and scoring.
enum class AnswerKind { Symbol, Chromosome, GeneList, Boolean, Coordinates, Species };

inline constexpr std::array<TaskType, 9> kAllTasks = {
    TaskType::GeneAlias,          TaskType::GeneNameConversion,    TaskType::GeneLocation,
    TaskType::SnpLocation,        TaskType::GeneSnpAssociation,    TaskType::GeneDiseaseAssociation,
    TaskType::ProteinCodingGenes, TaskType::AlignHuman,            TaskType::AlignSpecies,
};

std::string_view to_string(TaskType t);
std::string_view to_string(TaskArea a);

/// Accepts the enum spelling ("GeneAlias") or the GeneTuring display name
/// ("Gene alias", "Human genome DNA aligment", ...). Case-insensitive.
std::optional<TaskType> task_from_string(std::string_view s);

/// Throws PreconditionError for Unknown.
TaskArea area_of(TaskType t);
AnswerKind answer_kind(TaskType t);

/// Position of a task in kAllTasks; Unknown maps to 9.
std::size_t task_index(TaskType t);

}  // namespace nba
