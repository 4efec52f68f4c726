#include "nba/code/extract.hpp"

#include <array>
#include <regex>

#include "nba/common/text.hpp"

namespace nba {

namespace {

bool is_dna(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'A':
    case 'C':
    case 'G':
    case 'T':
    case 'N':
      return true;
    default:
      return false;
  }
}

std::optional<std::string> gene_by_template(std::string_view question) {
  static const std::array<std::regex, 4> templates = {
      std::regex(R"(official gene symbol of\s+(.+?)\s*\??\s*$)", std::regex::icase),
      std::regex(R"(chromosome is\s+(\S+)\s+gene\b)", std::regex::icase),
      std::regex(R"(^\s*is\s+(\S+)\s+a\s+protein[- ]coding\s+gene)", std::regex::icase),
      std::regex(R"(\bgene\s+(\S+)\s+(?:located|is)\b)", std::regex::icase),
  };
  const std::string q(question);
  for (const auto& re : templates) {
    std::smatch m;
    if (std::regex_search(q, m, re)) {
      auto g = normalize_gene_symbol(m[1].str());
      if (!g.empty()) return g;
    }
  }
  return std::nullopt;
}

std::optional<std::string> disease_of(std::string_view question) {
  static const std::regex re(R"(genes?\s+(?:related|associated)\s+(?:to|with)\s+(.+?)\s*\??\s*$)", std::regex::icase);
  const std::string q(question);
  std::smatch m;
  if (!std::regex_search(q, m, re)) return std::nullopt;
  auto d = text::trim(m[1].str());
  if (d.empty()) return std::nullopt;
  return d;
}

[[noreturn]] void none(const char* what, std::string_view question) {
  throw NoArgumentFound(std::string("no ") + what + " in question: " + std::string(question));
}

}  // namespace

std::string normalize_gene_symbol(std::string_view s) {
  std::string out = text::trim(s);
  auto keep = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
  while (!out.empty() && !keep(out.back())) out.pop_back();
  while (!out.empty() && !keep(out.front())) out.erase(0, 1);
  return out;
}

std::optional<std::string> find_dna_run(std::string_view text_in) {
  std::size_t best_pos = 0, best_len = 0;
  for (std::size_t i = 0; i < text_in.size();) {
    if (!is_dna(text_in[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text_in.size() && is_dna(text_in[j])) ++j;
    const bool bounded_left = i == 0 || !std::isalpha(static_cast<unsigned char>(text_in[i - 1]));
    const bool bounded_right = j == text_in.size() || !std::isalpha(static_cast<unsigned char>(text_in[j]));
    if (bounded_left && bounded_right && j - i > best_len) {
      best_pos = i;
      best_len = j - i;
    }
    i = j;
  }
  if (best_len < 11) return std::nullopt;
  return text::to_upper(text_in.substr(best_pos, best_len));
}

std::optional<std::string> find_rsid(std::string_view text_in) {
  static const std::regex re(R"(\b[rR][sS]([0-9]+)\b)");
  const std::string s(text_in);
  std::smatch m;
  if (!std::regex_search(s, m, re)) return std::nullopt;
  return "rs" + m[1].str();
}

std::optional<std::string> find_ensembl_id(std::string_view text_in) {
  static const std::regex re(R"(\b(ENSG[0-9]{11})(?:\.[0-9]+)?\b)", std::regex::icase);
  const std::string s(text_in);
  std::smatch m;
  if (!std::regex_search(s, m, re)) return std::nullopt;
  return text::to_upper(m[1].str());
}

std::map<std::string, std::string> extract_arguments(std::string_view question, TaskType task) {
  switch (task) {
    case TaskType::GeneAlias:
    case TaskType::GeneLocation:
    case TaskType::ProteinCodingGenes:
      if (auto g = gene_by_template(question)) return {{"gene", *g}};
      none("gene symbol", question);
    case TaskType::GeneNameConversion:
      if (auto id = find_ensembl_id(question)) return {{"ensembl_id", *id}};
      none("Ensembl gene id", question);
    case TaskType::SnpLocation:
    case TaskType::GeneSnpAssociation:
      if (auto rs = find_rsid(question)) return {{"rsid", *rs}};
      none("rsID", question);
    case TaskType::GeneDiseaseAssociation:
      if (auto d = disease_of(question)) return {{"disease", *d}};
      none("disease name", question);
    case TaskType::AlignHuman:
    case TaskType::AlignSpecies:
      if (auto s = find_dna_run(question)) return {{"sequence", *s}};
      none("DNA sequence", question);
    case TaskType::Unknown:
      break;
  }
  throw PreconditionError("extract_arguments needs a known task");
}

}  // namespace nba
