#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nba {

/// Id list of an esearch JSON response. Throws ParseError.
std::vector<std::string> esearch_ids(std::string_view body);
std::size_t esearch_count(std::string_view body);
/// Records in an esummary JSON result. Throws ParseError.
std::size_t esummary_record_count(std::string_view body);

/// Model-free reading of an E-utils document:
///
///   official_symbol    gene esummary  -> "PSMB10"
///   chromosome         gene esummary  -> "chr16"
///   snp_chromosome     snp esummary   -> "chr20"
///   snp_gene           snp esummary   -> "LINC01270"
///   omim_gene_symbols  omim esummary  -> "KRT12, KRT3"
///   protein_coding     gene efetch    -> "TRUE" | "NA"
///
/// With a subject, a record about some other entity yields nullopt, as
/// does a record without the wanted field. Throws ParseError for an
/// unreadable document and PreconditionError for an unknown goal.
std::optional<std::string> extract_field(std::string_view goal, std::string_view doc, std::string_view subject = {});

const std::vector<std::string>& document_goals();

}  // namespace nba
