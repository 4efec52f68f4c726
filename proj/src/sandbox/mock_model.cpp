#include "nba/sandbox/mock_model.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <regex>

#include "nba/common/error.hpp"
#include "nba/common/hash.hpp"
#include "nba/common/text.hpp"

namespace nba::sandbox {

using nlohmann::json;

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

/// Text after the last line starting with `label`, up to the end of line.
std::optional<std::string> line_after(const std::string& text, const std::string& label) {
  std::size_t pos = std::string::npos;
  for (std::size_t from = 0;;) {
    const auto p = text.find(label, from);
    if (p == std::string::npos) break;
    if (p == 0 || text[p - 1] == '\n') pos = p;
    from = p + 1;
  }
  if (pos == std::string::npos) return std::nullopt;
  const auto start = pos + label.size();
  return text::trim(text.substr(start, text.find('\n', start) - start));
}

std::string first_match(const std::string& s, const std::regex& re, int group = 1) {
  std::smatch m;
  return std::regex_search(s, m, re) ? m[group].str() : std::string{};
}

enum class Kind { alias, conversion, location, snp_location, snp_gene, disease, coding, align_human, align_species, unknown };

const char* kind_label(Kind k) {
  switch (k) {
    case Kind::alias: return "GeneAlias";
    case Kind::conversion: return "GeneNameConversion";
    case Kind::location: return "GeneLocation";
    case Kind::snp_location: return "SnpLocation";
    case Kind::snp_gene: return "GeneSnpAssociation";
    case Kind::disease: return "GeneDiseaseAssociation";
    case Kind::coding: return "ProteinCodingGenes";
    case Kind::align_human: return "AlignHuman";
    case Kind::align_species: return "AlignSpecies";
    case Kind::unknown: break;
  }
  return "Unknown";
}

Kind read_question(const std::string& question) {
  const auto q = text::to_lower(question);
  static const std::regex rsid(R"(\brs[0-9]+\b)");
  static const std::regex dna(R"([acgtn]{11,})");
  if (std::regex_search(q, dna)) {
    if (q.find("organism") != std::string::npos || q.find("species") != std::string::npos) return Kind::align_species;
    return Kind::align_human;
  }
  if (q.find("ensg") != std::string::npos) return Kind::conversion;
  if (q.find("official gene symbol") != std::string::npos) return Kind::alias;
  if (std::regex_search(q, rsid) || q.find("snp") != std::string::npos)
    return q.find("chromosome") != std::string::npos ? Kind::snp_location : Kind::snp_gene;
  if (q.find("related to") != std::string::npos || q.find("associated with") != std::string::npos)
    return Kind::disease;
  if (q.find("protein-coding") != std::string::npos || q.find("protein coding") != std::string::npos)
    return Kind::coding;
  if (q.find("chromosome") != std::string::npos) return Kind::location;
  return Kind::unknown;
}

std::string gene_token(const std::string& question) {
  static const std::vector<std::string> skip = {"SNP", "DNA", "NCBI", "TRUE", "NA", "ID", "RNA"};
  for (auto word : text::split_any(question, " \t?,.;:()\"'")) {
    if (word.size() < 2 || std::find(skip.begin(), skip.end(), word) != skip.end()) continue;
    const bool upper = std::any_of(word.begin(), word.end(), [](char c) { return std::isupper((unsigned char)c); });
    const bool digit = std::any_of(word.begin(), word.end(), [](char c) { return std::isdigit((unsigned char)c); });
    const bool caps = std::none_of(word.begin(), word.end(), [](char c) { return std::islower((unsigned char)c); });
    if (upper && (digit || caps) && word != "Is" && word.rfind("ENSG", 0) != 0) return word;
  }
  return {};
}

std::string disease_phrase(const std::string& question) {
  static const std::regex re(R"((?:related to|associated with)\s+(.+?)\s*\??\s*$)", std::regex::icase);
  return first_match(question, re);
}

std::string longest_dna(const std::string& question) {
  static const std::regex re(R"([ACGTNacgtn]{11,})");
  std::string best;
  for (auto it = std::sregex_iterator(question.begin(), question.end(), re); it != std::sregex_iterator(); ++it)
    if (it->length() > static_cast<long>(best.size())) best = it->str();
  return text::to_upper(best);
}

std::string answer(const std::string& value) { return "Answer: " + (value.empty() ? std::string("none") : value); }

// ----- roles ----------------------------------------------------------------

std::string classify(const std::string& user) {
  const auto question = line_after(user, "Question: ").value_or("");
  const auto k = read_question(question);
  if (k == Kind::unknown) return "I cannot place this question in any listed category.\nAnswer: Unknown";
  return std::string("The question matches the ") + kind_label(k) + " examples.\nAnswer: " + kind_label(k);
}

std::string infer(const std::string& user) {
  const auto question = line_after(user, "Question: ").value_or("");
  static const std::regex param_line(R"(^- ([a-z_]+) \(([a-z_]+),)");
  static const std::regex ensg(R"(ENSG[0-9]+)", std::regex::icase);
  static const std::regex rsid(R"(\brs[0-9]+\b)", std::regex::icase);
  json out = json::object();
  std::istringstream in(user);
  std::string line;
  while (std::getline(in, line)) {
    std::smatch m;
    if (!std::regex_search(line, m, param_line)) continue;
    const auto name = m[1].str();
    // Free-text parameters are read by what they are called.
    const auto kind = m[2].str() == "text" ? name : m[2].str();
    std::string v;
    if (kind == "gene_symbol") v = gene_token(question);
    else if (kind == "ensembl_id") v = first_match(question, ensg, 0);
    else if (kind == "rsid") v = first_match(question, rsid, 0);
    else if (kind == "disease") v = disease_phrase(question);
    else if (kind == "dna") v = longest_dna(question);
    out[name] = v.empty() ? json(nullptr) : json(v);
  }
  return "```json\n" + out.dump() + "\n```";
}

std::vector<json> records(const json& doc) {
  std::vector<json> out;
  if (!doc.contains("result")) return out;
  for (const auto& uid : doc["result"].value("uids", json::array()))
    if (uid.is_string() && doc["result"].contains(uid.get<std::string>())) {
      const auto& r = doc["result"][uid.get<std::string>()];
      if (!r.contains("error")) out.push_back(r);
    }
  return out;
}

bool names_subject(const json& rec, const std::string& subject) {
  if (subject.empty() || subject == "(none)") return true;
  if (text::iequals(rec.value("name", ""), subject)) return true;
  for (const auto& a : text::split_any(rec.value("otheraliases", ""), ","))
    if (text::iequals(text::trim(a), subject)) return true;
  return false;
}

std::string chr(std::string v) { return v.empty() ? v : "chr" + v; }

std::string specialist(const std::string& user) {
  const auto goal = first_match(user, std::regex(R"(^Goal \(([a-z_]+)\))"));
  const auto subject = line_after(user, "Subject: ").value_or("");
  const auto dpos = user.find("Document:\n");
  const auto epos = user.rfind("\n\nReply with");
  if (dpos == std::string::npos || epos == std::string::npos || epos < dpos) return answer("");
  const auto doc = user.substr(dpos + 10, epos - dpos - 10);

  if (goal == "protein_coding") {
    const auto type = first_match(doc, std::regex(R"re(<Entrezgene_type value="([^"]+)")re"));
    if (type.empty()) return answer("");
    return answer(type == "protein-coding" ? "TRUE" : "NA");
  }
  json j;
  try {
    j = json::parse(doc);
  } catch (const json::exception&) {
    return "The document is not readable JSON.\n" + answer("");
  }
  const auto recs = records(j);
  if (goal == "official_symbol" || goal == "chromosome") {
    for (const auto& r : recs) {
      if (!names_subject(r, subject)) continue;
      if (goal == "official_symbol") return answer(r.value("name", ""));
      const auto c = r.value("chromosome", "");
      if (c.find(',') != std::string::npos) return "The gene maps to more than one chromosome.\n" + answer("");
      return answer(chr(c));
    }
    return answer("");
  }
  if (goal == "snp_chromosome" || goal == "snp_gene") {
    for (const auto& r : recs) {
      if (goal == "snp_chromosome") return answer(chr(r.value("chr", "")));
      std::vector<std::string> names;
      for (const auto& g : r.value("genes", json::array())) names.push_back(g.value("name", ""));
      return answer(text::join(names, ", "));
    }
    return answer("");
  }
  if (goal == "omim_gene_symbols") {
    std::vector<std::string> symbols;
    for (const auto& r : recs) {
      const auto oid = r.value("oid", "");
      const auto title = r.value("title", "");
      if (oid.empty() || (oid[0] != '*' && oid[0] != '+') || title.find(';') == std::string::npos) continue;
      symbols.push_back(text::trim(title.substr(title.rfind(';') + 1)));
    }
    return answer(text::join(symbols, ", "));
  }
  return answer("");
}

std::string generalist(const std::string& user) {
  const auto value = line_after(user, "Tool result: ").value_or("");
  return "Based on the tool result:\n" + answer(value);
}

std::string guess_chromosome(const std::string& q) { return "chr" + std::to_string(1 + fnv1a(q) % 22); }

std::string direct(const std::string& user) {
  const auto question = line_after(user, "Question: ").value_or("");
  const std::string hedge = "I cannot look this up, so this is my best recollection.\n";
  switch (read_question(question)) {
    case Kind::alias: return hedge + answer(text::to_upper(gene_token(question)));
    case Kind::location:
    case Kind::snp_location: return hedge + answer(guess_chromosome(question));
    case Kind::coding: return hedge + answer("TRUE");
    case Kind::align_human: return hedge + answer(guess_chromosome(question) + ":1-" + std::to_string(fnv1a(question) % 100000));
    case Kind::align_species: return hedge + answer("human");
    default: return "I do not know.\n" + answer("unknown");
  }
}

const std::map<std::string, std::string>& common_names() {
  static const std::map<std::string, std::string> names = {
      {"Homo sapiens", "human"},        {"Mus musculus", "mouse"},      {"Rattus norvegicus", "rat"},
      {"Danio rerio", "zebrafish"},     {"Gallus gallus", "chicken"},   {"Saccharomyces cerevisiae", "yeast"},
      {"Caenorhabditis elegans", "worm"}, {"Drosophila melanogaster", "fly"}, {"Pan troglodytes", "chimpanzee"}};
  return names;
}

std::string genegpt(const std::string& user) {
  static const std::string eutils = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils/";
  static const std::string blast = "https://blast.ncbi.nlm.nih.gov/blast/Blast.cgi";
  const auto question = line_after(user, "Question: ").value_or("");
  std::size_t calls = 0;
  for (auto p = user.find("]->"); p != std::string::npos; p = user.find("]->", p + 1)) ++calls;
  const auto last = calls ? user.substr(user.rfind("]->") + 3) : std::string{};
  auto call = [](const std::string& url) { return "I will ask NCBI.\n[" + url + "]->"; };
  const auto ids = first_match(last, std::regex(R"re("idlist":\[([^\]]*)\])re"));
  std::string id_list;
  for (auto id : text::split_any(ids, ",\"")) id_list += (id_list.empty() || text::trim(id).empty() ? "" : ",") + text::trim(id);
  if (calls && last.find("\"idlist\":[]") != std::string::npos) return "NCBI found nothing.\n" + answer("unknown");

  const auto k = read_question(question);
  switch (k) {
    case Kind::alias:
    case Kind::conversion:
    case Kind::location:
    case Kind::coding: {
      const auto term = k == Kind::conversion ? first_match(question, std::regex(R"(ENSG[0-9]+)"), 0) : gene_token(question);
      if (calls == 0) return call(eutils + "esearch.fcgi?db=gene&term=" + percent_encode(term) + "&retmode=json");
      if (calls == 1) {
        const auto first = id_list.substr(0, id_list.find(','));
        if (k == Kind::coding) return call(eutils + "efetch.fcgi?db=gene&id=" + first + "&retmode=xml");
        return call(eutils + "esummary.fcgi?db=gene&id=" + first + "&retmode=json");
      }
      if (k == Kind::coding) {
        const auto type = first_match(last, std::regex(R"re(<Entrezgene_type value="([^"]+)")re"));
        return answer(type.empty() ? "" : type == "protein-coding" ? "TRUE" : "NA");
      }
      if (k == Kind::location) return answer(chr(first_match(last, std::regex(R"re("chromosome":"([^"]*)")re"))));
      return answer(first_match(last, std::regex(R"re("name":"([^"]*)")re")));
    }
    case Kind::snp_location:
    case Kind::snp_gene: {
      const auto rs = first_match(question, std::regex(R"(\brs([0-9]+)\b)"));
      if (calls == 0) return call(eutils + "esummary.fcgi?db=snp&id=" + rs + "&retmode=json");
      if (k == Kind::snp_location) return answer(chr(first_match(last, std::regex(R"re("chr":"([^"]*)")re"))));
      const auto genes = first_match(last, std::regex(R"re("genes":\[([^\]]*)\])re"));
      std::vector<std::string> names;
      static const std::regex name_re(R"re("name":"([^"]*)")re");
      for (auto it = std::sregex_iterator(genes.begin(), genes.end(), name_re); it != std::sregex_iterator(); ++it)
        names.push_back((*it)[1].str());
      return answer(text::join(names, ", "));
    }
    case Kind::disease: {
      if (calls == 0)
        return call(eutils + "esearch.fcgi?db=omim&term=" + percent_encode(disease_phrase(question)) + "&retmode=json");
      if (calls == 1) return call(eutils + "esummary.fcgi?db=omim&id=" + id_list + "&retmode=json");
      std::vector<std::string> symbols;
      static const std::regex entry(R"re("oid":"([^"]*)","title":"([^"]*)")re");
      for (auto it = std::sregex_iterator(last.begin(), last.end(), entry); it != std::sregex_iterator(); ++it) {
        const auto oid = (*it)[1].str(), title = (*it)[2].str();
        if (!oid.empty() && (oid[0] == '*' || oid[0] == '+') && title.find(';') != std::string::npos)
          symbols.push_back(text::trim(title.substr(title.rfind(';') + 1)));
      }
      return answer(text::join(symbols, ", "));
    }
    case Kind::align_human:
    case Kind::align_species: {
      if (calls == 0)
        return call(blast + "?CMD=Put&PROGRAM=blastn&MEGABLAST=on&DATABASE=nt&QUERY=" + longest_dna(question));
      if (calls == 1) {
        const auto rid = first_match(last, std::regex(R"(RID = ([A-Z0-9]+))"));
        return call(blast + "?CMD=Get&FORMAT_TYPE=JSON2_S&RID=" + rid);
      }
      const auto sciname = first_match(last, std::regex(R"re("sciname":"([^"]*)")re"));
      if (k == Kind::align_species) {
        auto it = common_names().find(sciname);
        return answer(it == common_names().end() ? sciname : it->second);
      }
      const auto title = first_match(last, std::regex(R"re("title":"[^"]*chromosome ([0-9XYM]+)\b)re"));
      const auto from = first_match(last, std::regex(R"re("hit_from":([0-9]+))re"));
      const auto to = first_match(last, std::regex(R"re("hit_to":([0-9]+))re"));
      if (title.empty() || from.empty() || to.empty()) return answer("");
      const auto a = std::stoll(from), b = std::stoll(to);
      return answer("chr" + title + ":" + std::to_string(std::min(a, b)) + "-" + std::to_string(std::max(a, b)));
    }
    case Kind::unknown:
      break;
  }
  return "I do not know.\n" + answer("unknown");
}

std::uint64_t approx_tokens(std::size_t chars) { return (chars + 3) / 4; }

HttpResponse json_response(int status, const json& j) {
  HttpResponse r;
  r.status = status;
  r.body = j.dump();
  r.headers["Content-Type"] = "application/json";
  return r;
}

}  // namespace

std::vector<double> trigram_embedding(std::string_view text_in, std::size_t dimension) {
  if (dimension == 0) throw PreconditionError("embedding dimension must be positive");
  std::vector<double> v(dimension, 0.0);
  const std::string s = " " + text::to_lower(text_in) + " ";
  for (std::size_t i = 0; i + 3 <= s.size(); ++i) {
    const auto h = fnv1a(std::string_view(s).substr(i, 3));
    v[h % dimension] += (h >> 32) & 1 ? -1.0 : 1.0;
  }
  double norm = 0;
  for (double x : v) norm += x * x;
  if (norm == 0) {
    v[0] = 1.0;
    return v;
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

std::string MockModel::respond(const std::string& system, const std::string& user) const {
  const auto role = line_after(system, "Role: ").value_or("");
  if (role == "classifier") return classify(user);
  if (role == "parameter-extractor") return infer(user);
  if (role == "specialist") return specialist(user);
  if (role == "generalist") return generalist(user);
  if (role == "genegpt") return genegpt(user);
  return direct(user);
}

json MockModel::chat(const json& request) const {
  if (!request.is_object() || !request.contains("messages") || !request["messages"].is_array())
    throw SchemaError("chat request needs a messages array");
  std::string system, user;
  std::size_t chars = 0;
  for (const auto& m : request["messages"]) {
    const auto role = m.value("role", "");
    const auto content = m.value("content", "");
    chars += content.size();
    if (role == "system") system += content;
    if (role == "user") user = content;
  }
  const auto content = respond(system, user);
  return {{"id", "chatcmpl-" + sha256_hex(request.dump()).substr(0, 24)},
          {"object", "chat.completion"},
          {"created", 0},
          {"model", request.value("model", "mock")},
          {"choices", json::array({{{"index", 0},
                                    {"message", {{"role", "assistant"}, {"content", content}}},
                                    {"finish_reason", "stop"}}})},
          {"usage",
           {{"prompt_tokens", approx_tokens(chars)},
            {"completion_tokens", approx_tokens(content.size())},
            {"total_tokens", approx_tokens(chars) + approx_tokens(content.size())}}}};
}

json MockModel::embeddings(const json& request) const {
  if (!request.is_object() || !request.contains("input")) throw SchemaError("embeddings request needs an input");
  std::vector<std::string> inputs;
  if (request["input"].is_string())
    inputs.push_back(request["input"].get<std::string>());
  else if (request["input"].is_array())
    for (const auto& s : request["input"]) inputs.push_back(s.get<std::string>());
  else
    throw SchemaError("embeddings input must be a string or an array of strings");
  json data = json::array();
  std::size_t chars = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    data.push_back({{"object", "embedding"}, {"index", i}, {"embedding", trigram_embedding(inputs[i])}});
    chars += inputs[i].size();
  }
  return {{"object", "list"},
          {"data", data},
          {"model", request.value("model", "mock-embed")},
          {"usage", {{"prompt_tokens", approx_tokens(chars)}, {"total_tokens", approx_tokens(chars)}}}};
}

HttpResponse MockModel::handle(const HttpRequest& request) const {
  const auto path = parse_url(request.url).path_and_query;
  if (request.method != "POST") return json_response(405, {{"error", {{"message", "POST only"}}}});
  try {
    const json body = json::parse(request.body);
    if (path.ends_with("/chat/completions")) return json_response(200, chat(body));
    if (path.ends_with("/embeddings")) return json_response(200, embeddings(body));
    return json_response(404, {{"error", {{"message", "unknown route " + path}}}});
  } catch (const json::exception& e) {
    return json_response(400, {{"error", {{"message", e.what()}}}});
  } catch (const SchemaError& e) {
    return json_response(400, {{"error", {{"message", e.what()}}}});
  }
}

HttpResponse MockModelTransport::send(const HttpRequest& request) {
  requests_.fetch_add(1);
  return model_->handle(request);
}

}  // namespace nba::sandbox
