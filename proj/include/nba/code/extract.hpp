#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "nba/common/error.hpp"
#include "nba/plans/task_type.hpp"

namespace nba {

class NoArgumentFound : public Error {
 public:
  using Error::Error;
};

/// Pattern-based arguments for URL construction, named like plan
/// parameters: gene, ensembl_id, rsid, disease, sequence.
///
///   rsIDs        rs\d+ (lower-cased)
///   Ensembl ids  ENSG\d{11} (upper-cased)
///   DNA          longest run over ACGTN of length >= 11 (upper-cased)
///   gene symbol  fixed position in the question template
///   disease      text after "genes related to"
///
/// Pure in (question, task). Throws NoArgumentFound, PreconditionError
/// for Unknown.
std::map<std::string, std::string> extract_arguments(std::string_view question, TaskType task);

/// Trims and strips leading/trailing punctuation; inner '-', '.', '_' kept.
std::string normalize_gene_symbol(std::string_view s);
std::optional<std::string> find_dna_run(std::string_view text);
std::optional<std::string> find_rsid(std::string_view text);
std::optional<std::string> find_ensembl_id(std::string_view text);

}  // namespace nba
