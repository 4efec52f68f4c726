#include "nba/ncbi/documents.hpp"

#include <regex>

#include <nlohmann/json.hpp>

#include "nba/common/error.hpp"
#include "nba/common/text.hpp"
#include "nba/ncbi/errors.hpp"

namespace nba {

using nlohmann::json;

namespace {

json parse_json(std::string_view doc, const char* what) {
  try {
    return json::parse(doc);
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

std::string as_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  return {};
}

/// Records of an esummary result in uid order.
std::vector<json> summary_records(std::string_view doc) {
  const json j = parse_json(doc, "esummary document");
  if (!j.contains("result") || !j["result"].is_object()) throw ParseError("esummary document has no result object");
  const json& result = j["result"];
  std::vector<json> out;
  for (const auto& uid : result.value("uids", json::array())) {
    const auto id = as_text(uid);
    if (result.contains(id) && result[id].is_object() && !result[id].contains("error")) out.push_back(result[id]);
  }
  return out;
}

bool gene_record_names(const json& rec, std::string_view subject) {
  if (subject.empty()) return true;
  const auto s = text::trim(subject);
  if (text::iequals(rec.value("name", ""), s) || text::iequals(rec.value("nomenclaturesymbol", ""), s)) return true;
  for (const auto& alias : text::split_any(rec.value("otheraliases", ""), ","))
    if (text::iequals(text::trim(alias), s)) return true;
  return false;
}

std::string chr_label(std::string v) {
  v = text::trim(v);
  if (v.empty()) return {};
  if (text::starts_with_ci(v, "chr")) v = v.substr(3);
  return "chr" + v;
}

std::optional<std::string> official_symbol(std::string_view doc, std::string_view subject) {
  for (const auto& rec : summary_records(doc)) {
    if (!gene_record_names(rec, subject)) continue;
    auto name = text::trim(rec.value("name", ""));
    if (!name.empty()) return name;
  }
  return std::nullopt;
}

std::optional<std::string> gene_chromosome(std::string_view doc, std::string_view subject) {
  for (const auto& rec : summary_records(doc)) {
    if (!gene_record_names(rec, subject)) continue;
    const auto chr = text::trim(rec.value("chromosome", ""));
    // "X, Y" style values mean the gene is not on a single chromosome.
    if (chr.empty() || chr.find_first_of(",|") != std::string::npos) return std::nullopt;
    return chr_label(chr);
  }
  return std::nullopt;
}

const json* snp_record(const std::vector<json>& recs, std::string_view subject) {
  for (const auto& rec : recs) {
    if (subject.empty()) return &rec;
    const auto id = "rs" + as_text(rec.contains("snp_id") ? rec["snp_id"] : rec.value("uid", json{}));
    if (text::iequals(id, text::trim(subject))) return &rec;
  }
  return nullptr;
}

std::optional<std::string> snp_chromosome(std::string_view doc, std::string_view subject) {
  const auto recs = summary_records(doc);
  const json* rec = snp_record(recs, subject);
  if (!rec) return std::nullopt;
  auto chr = text::trim(rec->value("chr", ""));
  if (chr.empty()) {
    const auto pos = rec->value("chrpos", "");
    chr = text::trim(pos.substr(0, pos.find(':')));
  }
  if (chr.empty()) return std::nullopt;
  return chr_label(chr);
}

std::optional<std::string> snp_gene(std::string_view doc, std::string_view subject) {
  const auto recs = summary_records(doc);
  const json* rec = snp_record(recs, subject);
  if (!rec || !rec->contains("genes") || !(*rec)["genes"].is_array()) return std::nullopt;
  std::vector<std::string> names;
  for (const auto& g : (*rec)["genes"]) {
    auto n = text::trim(g.value("name", ""));
    if (!n.empty() && std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
  }
  if (names.empty()) return std::nullopt;
  return text::join(names, ", ");
}

std::optional<std::string> omim_gene_symbols(std::string_view doc) {
  std::vector<std::string> symbols;
  for (const auto& rec : summary_records(doc)) {
    const auto oid = text::trim(rec.value("oid", ""));
    // '*' gene entries and '+' gene-with-phenotype entries carry a HGNC symbol.
    if (oid.empty() || (oid[0] != '*' && oid[0] != '+')) continue;
    const auto title = rec.value("title", "");
    const auto semi = title.rfind(';');
    if (semi == std::string::npos) continue;
    auto sym = text::trim(title.substr(semi + 1));
    if (!sym.empty() && std::find(symbols.begin(), symbols.end(), sym) == symbols.end()) symbols.push_back(sym);
  }
  if (symbols.empty()) return std::nullopt;
  return text::join(symbols, ", ");
}

std::optional<std::string> protein_coding(std::string_view doc, std::string_view subject) {
  const std::string s(doc);
  if (s.find("<Entrezgene") == std::string::npos) throw ParseError("efetch document is not an Entrezgene record");
  if (!subject.empty()) {
    static const std::regex locus_re(R"(<Gene-ref_locus>([^<]*)</Gene-ref_locus>)");
    static const std::regex syn_re(R"(<Gene-ref_syn_E>([^<]*)</Gene-ref_syn_E>)");
    bool named = false;
    for (const auto* re : {&locus_re, &syn_re})
      for (auto it = std::sregex_iterator(s.begin(), s.end(), *re); it != std::sregex_iterator(); ++it)
        named = named || text::iequals(text::trim((*it)[1].str()), text::trim(subject));
    if (!named) return std::nullopt;
  }
  static const std::regex type_re(R"re(<Entrezgene_type\s+value="([^"]+)")re");
  std::smatch m;
  if (!std::regex_search(s, m, type_re)) return std::nullopt;
  return m[1].str() == "protein-coding" ? "TRUE" : "NA";
}

}  // namespace

std::vector<std::string> esearch_ids(std::string_view body) {
  const json j = parse_json(body, "esearch response");
  if (!j.contains("esearchresult")) throw ParseError("esearch response has no esearchresult");
  std::vector<std::string> ids;
  for (const auto& id : j["esearchresult"].value("idlist", json::array())) ids.push_back(as_text(id));
  return ids;
}

std::size_t esearch_count(std::string_view body) {
  const json j = parse_json(body, "esearch response");
  if (!j.contains("esearchresult")) throw ParseError("esearch response has no esearchresult");
  const auto c = as_text(j["esearchresult"].value("count", json("0")));
  try {
    return std::stoul(c.empty() ? "0" : c);
  } catch (const std::exception&) {
    throw ParseError("esearch count is not a number: " + c);
  }
}

std::size_t esummary_record_count(std::string_view body) { return summary_records(body).size(); }

const std::vector<std::string>& document_goals() {
  static const std::vector<std::string> goals = {"official_symbol", "chromosome",        "snp_chromosome",
                                                 "snp_gene",        "omim_gene_symbols", "protein_coding"};
  return goals;
}

std::optional<std::string> extract_field(std::string_view goal, std::string_view doc, std::string_view subject) {
  if (goal == "official_symbol") return official_symbol(doc, subject);
  if (goal == "chromosome") return gene_chromosome(doc, subject);
  if (goal == "snp_chromosome") return snp_chromosome(doc, subject);
  if (goal == "snp_gene") return snp_gene(doc, subject);
  if (goal == "omim_gene_symbols") return omim_gene_symbols(doc);
  if (goal == "protein_coding") return protein_coding(doc, subject);
  throw PreconditionError("unknown extraction goal '" + std::string(goal) + "'");
}

}  // namespace nba
