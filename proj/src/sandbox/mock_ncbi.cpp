#include "nba/sandbox/mock_ncbi.hpp"

#include <regex>

#include <nlohmann/json.hpp>

#include "nba/common/hash.hpp"
#include "nba/common/text.hpp"

namespace nba::sandbox {

using nlohmann::json;

namespace {

HttpResponse reply(int status, std::string body, const std::string& type) {
  HttpResponse r;
  r.status = status;
  r.body = std::move(body);
  r.headers["Content-Type"] = type;
  return r;
}

HttpResponse json_reply(const json& j) { return reply(200, j.dump(), "application/json"); }

std::string get(const std::map<std::string, std::string>& q, const std::string& key) {
  auto it = q.find(key);
  return it == q.end() ? std::string{} : it->second;
}

/// "SYM[sym] AND human[orgn]" -> "SYM"; quotes and field tags removed.
std::string search_subject(std::string term) {
  static const std::regex tags(R"(\[[A-Za-z ]+\])");
  static const std::regex organism(R"(\s+AND\s+\S+$)", std::regex::icase);
  term = std::regex_replace(term, organism, "");
  term = std::regex_replace(term, tags, "");
  term.erase(std::remove(term.begin(), term.end(), '"'), term.end());
  return text::trim(term);
}

json gene_summary(const Gene& g) {
  std::vector<std::string> others = g.aliases;
  others.insert(others.end(), g.previous.begin(), g.previous.end());
  const auto chrloc = g.chromosome.substr(0, g.chromosome.find(','));
  return {{"uid", g.uid},
          {"name", g.symbol},
          {"description", g.full_name},
          {"status", 0},
          {"currentid", 0},
          {"chromosome", g.chromosome},
          {"geneticsource", "genomic"},
          {"maplocation", chrloc + (g.start % 2 ? "p" : "q") + std::to_string(11 + g.start % 17)},
          {"otheraliases", text::join(others, ", ")},
          {"otherdesignations", g.full_name},
          {"nomenclaturesymbol", g.symbol},
          {"nomenclaturename", g.full_name},
          {"nomenclaturestatus", "Official"},
          {"mim", json::array()},
          {"genomicinfo",
           json::array({{{"chrloc", chrloc}, {"chrstart", g.start}, {"chrstop", g.stop}, {"exoncount", 4 + g.stop % 9}}})},
          {"organism", {{"scientificname", "Homo sapiens"}, {"commonname", "human"}, {"taxid", 9606}}},
          {"summary", ""}};
}

json snp_summary(const Snp& s, const World& world) {
  json genes = json::array();
  for (const auto& sym : s.genes) {
    const auto found = world.search_symbol(sym);
    genes.push_back({{"name", sym}, {"gene_id", found.empty() ? "" : found.front()->uid}});
  }
  const auto id = std::to_string(s.id);
  return {{"uid", id},
          {"snp_id", s.id},
          {"chr", s.chromosome},
          {"chrpos", s.chromosome + ":" + std::to_string(s.position)},
          {"genes", genes},
          {"snp_class", "snv"},
          {"docsum", "HGVS=NC_0000:g." + std::to_string(s.position) + "A>G"},
          {"global_mafs", json::array()}};
}

int gene_type_code(const std::string& type) {
  if (type == "protein-coding") return 6;
  if (type == "ncRNA") return 8;
  return 2;
}

std::string gene_xml(const Gene& g) {
  std::string syn;
  for (const auto& a : g.aliases) syn += "          <Gene-ref_syn_E>" + a + "</Gene-ref_syn_E>\n";
  for (const auto& a : g.previous) syn += "          <Gene-ref_syn_E>" + a + "</Gene-ref_syn_E>\n";
  return "  <Entrezgene>\n"
         "    <Entrezgene_track-info>\n"
         "      <Gene-track>\n"
         "        <Gene-track_geneid>" + g.uid + "</Gene-track_geneid>\n"
         "        <Gene-track_status value=\"live\">0</Gene-track_status>\n"
         "      </Gene-track>\n"
         "    </Entrezgene_track-info>\n"
         "    <Entrezgene_type value=\"" + g.type + "\">" + std::to_string(gene_type_code(g.type)) + "</Entrezgene_type>\n"
         "    <Entrezgene_source>\n"
         "      <BioSource>\n"
         "        <BioSource_org><Org-ref><Org-ref_taxname>Homo sapiens</Org-ref_taxname></Org-ref></BioSource_org>\n"
         "      </BioSource>\n"
         "    </Entrezgene_source>\n"
         "    <Entrezgene_gene>\n"
         "      <Gene-ref>\n"
         "        <Gene-ref_locus>" + g.symbol + "</Gene-ref_locus>\n"
         "        <Gene-ref_desc>" + g.full_name + "</Gene-ref_desc>\n"
         "        <Gene-ref_maploc>" + g.chromosome + "</Gene-ref_maploc>\n"
         "        <Gene-ref_syn>\n" + syn +
         "        </Gene-ref_syn>\n"
         "      </Gene-ref>\n"
         "    </Entrezgene_gene>\n"
         "  </Entrezgene>\n";
}

std::string make_rid(const std::string& program, const std::string& database, const std::string& sequence) {
  static const char kAlphabet[] = "0123456789ABCDEFGHJKLMNPRSTUVWXYZ";
  const auto digest = sha256_hex(program + "|" + database + "|" + sequence);
  std::string rid;
  for (std::size_t i = 0; i < 11; ++i) {
    const auto byte = std::stoi(digest.substr(i * 2, 2), nullptr, 16);
    rid += kAlphabet[byte % (sizeof kAlphabet - 1)];
  }
  return rid;
}

json blast_report(const Alignment& a, const std::string& database, const std::string& program) {
  const bool human_only = database.rfind("GCF_000001405", 0) == 0;
  json hits = json::array();
  int num = 0;
  for (const auto& h : a.hits) {
    if (human_only && h.sciname != "Homo sapiens") continue;
    const auto len = std::llabs(h.hit_to - h.hit_from) + 1;
    const bool minus = h.hit_from > h.hit_to;
    const std::string seq = a.sequence.substr(0, static_cast<std::size_t>(len));
    ++num;
    hits.push_back({{"num", num},
                    {"description", json::array({{{"id", "ref|" + h.accession + "|"},
                                                  {"accession", h.accession},
                                                  {"title", h.title},
                                                  {"taxid", h.taxid},
                                                  {"sciname", h.sciname}}})},
                    {"len", 50'000'000 + h.taxid},
                    {"hsps", json::array({{{"num", 1},
                                           {"bit_score", h.bit_score},
                                           {"score", static_cast<int>(h.bit_score / 1.85)},
                                           {"evalue", num == 1 ? 1e-20 : 1e-5},
                                           {"identity", len},
                                           {"query_from", 1},
                                           {"query_to", len},
                                           {"query_strand", "Plus"},
                                           {"hit_from", h.hit_from},
                                           {"hit_to", h.hit_to},
                                           {"hit_strand", minus ? "Minus" : "Plus"},
                                           {"align_len", len},
                                           {"gaps", 0},
                                           {"qseq", seq},
                                           {"hseq", seq},
                                           {"midline", std::string(seq.size(), '|')}}})}});
  }
  json report = {{"program", "blastn"},
                 {"version", "BLASTN 2.16.0+"},
                 {"reference", "Stephen F. Altschul et al. (1997), Nucleic Acids Res. 25:3389-3402."},
                 {"search_target", {{"db", database}}},
                 {"params", {{"expect", 10}, {"sc_match", 1}, {"sc_mismatch", -2}, {"filter", "L;m;"}}},
                 {"results",
                  {{"search",
                    {{"query_id", "Query_1"},
                     {"query_len", a.sequence.size()},
                     {"hits", hits},
                     {"stat", {{"db_num", 100000}, {"db_len", 3'100'000'000LL}, {"eff_space", 1e11}}}}}}}};
  (void)program;
  return {{"BlastOutput2", json::array({{{"report", report}}})}};
}

}  // namespace

MockNcbi::MockNcbi(std::shared_ptr<const World> world, int waiting_polls)
    : world_(std::move(world)), waiting_polls_(waiting_polls) {
  // RIDs outlive the process that issued them (NCBI keeps them for a day),
  // so a resumed capture can still poll a search submitted earlier.
  for (const auto& a : world_->alignments)
    for (const char* db : {"GCF_000001405.40_top_level", "nt"})
      for (const char* program : {"blastn/megablast", "blastn"})
        searches_.try_emplace(make_rid(program, db, a.sequence), Search{a.sequence, db, 0});
}

std::size_t MockNcbi::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

HttpResponse MockNcbi::handle(const HttpRequest& request) {
  const auto parsed = parse_url(request.url);
  const auto qpos = parsed.path_and_query.find('?');
  const auto path = parsed.path_and_query.substr(0, qpos);
  std::vector<std::pair<std::string, std::string>> params;
  if (qpos != std::string::npos) params = parse_query(std::string_view(parsed.path_and_query).substr(qpos + 1));
  if (request.method == "POST") {
    auto form = parse_query(request.body);
    params.insert(params.end(), form.begin(), form.end());
  }
  return handle(request.method, path, params);
}

HttpResponse MockNcbi::handle(const std::string& method, const std::string& path,
                              const std::vector<std::pair<std::string, std::string>>& params) {
  {
    std::lock_guard lock(mu_);
    ++requests_;
  }
  if (method != "GET" && method != "POST") return reply(405, "method not allowed", "text/plain");
  std::map<std::string, std::string> q;
  for (const auto& [k, v] : params) q[text::to_lower(k)] = v;
  if (path.ends_with("/esearch.fcgi")) return esearch(q);
  if (path.ends_with("/esummary.fcgi")) return esummary(q);
  if (path.ends_with("/efetch.fcgi")) return efetch(q);
  if (path.ends_with("/Blast.cgi")) return blast(q);
  return reply(404, "not found: " + path, "text/plain");
}

HttpResponse MockNcbi::esearch(const std::map<std::string, std::string>& q) const {
  const auto db = text::to_lower(get(q, "db"));
  const auto term = get(q, "term");
  if (term.empty()) return reply(400, R"({"error":"Empty term and query_key - nothing todo"})", "application/json");
  std::vector<std::string> ids;
  const auto subject = search_subject(term);
  if (db == "gene") {
    static const std::regex ensg(R"(^ENSG[0-9]+$)", std::regex::icase);
    if (std::regex_match(subject, ensg)) {
      if (const Gene* g = world_->search_ensembl(subject)) ids.push_back(g->uid);
    } else {
      for (const Gene* g : world_->search_symbol(subject)) ids.push_back(g->uid);
    }
  } else if (db == "omim") {
    if (const Disease* d = world_->search_disease(subject)) ids = d->entries;
  } else if (db == "snp") {
    if (subject.size() > 2 && text::starts_with_ci(subject, "rs"))
      if (world_->snp_by_id(std::stoull(subject.substr(2)))) ids.push_back(subject.substr(2));
  } else {
    return reply(400, R"({"error":"Invalid db name specified: )" + db + "\"}", "application/json");
  }
  std::size_t retmax = 20;
  if (auto r = get(q, "retmax"); !r.empty()) retmax = std::stoul(r);
  const auto count = ids.size();
  if (ids.size() > retmax) ids.resize(retmax);
  return json_reply({{"header", {{"type", "esearch"}, {"version", "0.3"}}},
                     {"esearchresult",
                      {{"count", std::to_string(count)},
                       {"retmax", std::to_string(ids.size())},
                       {"retstart", "0"},
                       {"idlist", ids},
                       {"translationset", json::array()},
                       {"querytranslation", term}}}});
}

HttpResponse MockNcbi::esummary(const std::map<std::string, std::string>& q) const {
  const auto db = text::to_lower(get(q, "db"));
  const auto ids_param = get(q, "id");
  if (ids_param.empty()) return reply(400, R"({"error":"Empty id list - nothing todo"})", "application/json");
  json result = json::object();
  json uids = json::array();
  for (auto id : text::split_any(ids_param, ",")) {
    id = text::trim(id);
    if (id.empty()) continue;
    uids.push_back(id);
    json rec;
    if (db == "gene") {
      if (const Gene* g = world_->gene_by_uid(id)) rec = gene_summary(*g);
    } else if (db == "snp") {
      const Snp* s = id.find_first_not_of("0123456789") == std::string::npos ? world_->snp_by_id(std::stoull(id))
                                                                             : nullptr;
      if (s && !s->withdrawn) rec = snp_summary(*s, *world_);
    } else if (db == "omim") {
      if (const OmimEntry* e = world_->omim_by_uid(id))
        rec = {{"uid", e->uid}, {"oid", e->oid}, {"title", e->title}, {"alttitles", ""}, {"locus", ""}};
    } else {
      return reply(400, R"({"error":"Invalid db name specified: )" + db + "\"}", "application/json");
    }
    if (rec.is_null()) rec = {{"uid", id}, {"error", "cannot get document summary"}};
    result[id] = rec;
  }
  result["uids"] = uids;
  return json_reply({{"header", {{"type", "esummary"}, {"version", "0.3"}}}, {"result", result}});
}

HttpResponse MockNcbi::efetch(const std::map<std::string, std::string>& q) const {
  const auto db = text::to_lower(get(q, "db"));
  if (db != "gene") return reply(400, "efetch supports db=gene only here", "text/plain");
  std::string body =
      "<?xml version=\"1.0\" ?>\n<!DOCTYPE Entrezgene-Set PUBLIC \"-//NCBI//NCBI Entrezgene/EN\" "
      "\"https://www.ncbi.nlm.nih.gov/data_specs/dtd/NCBI_Entrezgene.dtd\">\n<Entrezgene-Set>\n";
  bool any = false;
  for (auto id : text::split_any(get(q, "id"), ",")) {
    if (const Gene* g = world_->gene_by_uid(text::trim(id))) {
      body += gene_xml(*g);
      any = true;
    }
  }
  if (!any) return reply(400, "<ERROR>Cannot retrieve the requested records</ERROR>\n", "text/xml");
  body += "</Entrezgene-Set>\n";
  return reply(200, body, "text/xml");
}

HttpResponse MockNcbi::blast(const std::map<std::string, std::string>& q) {
  const auto cmd = text::to_lower(get(q, "cmd"));
  if (cmd == "put") {
    const auto query = text::to_upper(text::trim(get(q, "query")));
    const auto database = get(q, "database");
    if (query.empty() || database.empty() || get(q, "program").empty())
      return reply(400, "Error: QUERY, DATABASE and PROGRAM are required", "text/html");
    const auto program = get(q, "program") + (text::iequals(get(q, "megablast"), "on") ? "/megablast" : "");
    const auto rid = make_rid(program, database, query);
    {
      std::lock_guard lock(mu_);
      searches_.try_emplace(rid, Search{query, database, 0});
    }
    return reply(200,
                 "<!DOCTYPE html>\n<html><head><title>NCBI Blast</title></head><body>\n"
                 "<!--QBlastInfoBegin\n    RID = " + rid + "\n    RTOE = 15\nQBlastInfoEnd\n-->\n"
                 "<p>Your search is queued.</p>\n</body></html>\n",
                 "text/html");
  }
  if (cmd != "get") return reply(400, "Error: unknown CMD", "text/html");

  const auto rid = get(q, "rid");
  Search search;
  bool known = false;
  {
    std::lock_guard lock(mu_);
    if (auto it = searches_.find(rid); it != searches_.end()) {
      known = true;
      if (text::iequals(get(q, "format_object"), "SearchInfo")) ++it->second.polls;
      search = it->second;
    }
  }
  const bool ready = known && search.polls > waiting_polls_;
  if (text::iequals(get(q, "format_object"), "SearchInfo")) {
    const std::string status = !known ? "UNKNOWN" : ready ? "READY" : "WAITING";
    return reply(200,
                 "<!--\nQBlastInfoBegin\n\tStatus=" + status + "\nQBlastInfoEnd\n-->\n" +
                     (ready ? "<!--\nQBlastInfoBegin\n\tThereAreHits=yes\nQBlastInfoEnd\n-->\n" : ""),
                 "text/html");
  }
  if (!known) return reply(400, "Error: RID " + rid + " not found", "text/html");
  const Alignment* a = world_->alignment_for(search.sequence);
  Alignment empty{search.sequence, {}};
  return json_reply(blast_report(a ? *a : empty, search.database, get(q, "program")));
}

}  // namespace nba::sandbox
