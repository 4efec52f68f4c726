#include "nba/exec/tools.hpp"

#include <fstream>
#include <regex>

#include "nba/common/text.hpp"
#include "nba/ncbi/documents.hpp"

namespace nba {

using nlohmann::json;

LookupTables LookupTables::from_json(const json& j, const std::string& origin) {
  if (!j.is_object() || j.value("schema_version", 0) != 1 || !j.contains("tables") || !j["tables"].is_object())
    throw SchemaError(origin + ": expected {\"schema_version\":1,\"tables\":{...}}");
  LookupTables t;
  for (const auto& [name, table] : j["tables"].items()) {
    if (!table.is_object()) throw SchemaError(origin + ": table " + name + " is not an object");
    auto& dst = t.tables_[name];
    for (const auto& [k, v] : table.items()) {
      if (!v.is_string()) throw SchemaError(origin + ": table " + name + " value for " + k + " is not a string");
      dst[text::to_lower(text::trim(k))] = v.get<std::string>();
    }
  }
  return t;
}

LookupTables LookupTables::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open lookup tables " + path.string());
  try {
    return from_json(json::parse(in), path.string());
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

std::optional<std::string> LookupTables::lookup(const std::string& table, const std::string& key) const {
  auto t = tables_.find(table);
  if (t == tables_.end()) return std::nullopt;
  auto it = t->second.find(text::to_lower(text::trim(key)));
  if (it == t->second.end()) return std::nullopt;
  return it->second;
}

namespace {

const std::string& input(const StepContext& ctx, const char* name) {
  auto it = ctx.inputs.find(name);
  if (it == ctx.inputs.end()) throw PreconditionError(std::string("step input '") + name + "' is missing");
  return it->second;
}

std::string optional_input(const StepContext& ctx, const char* name) {
  auto it = ctx.inputs.find(name);
  return it == ctx.inputs.end() ? std::string{} : it->second;
}

const char* provenance(const ToolResponse& r) { return r.from_cache ? "cache" : r.from_fixture ? "fixture" : "network"; }

BlastProgram program_of(const StepContext& ctx) {
  auto p = blast_program_from_string(input(ctx, "program"));
  if (!p) throw PreconditionError("unknown BLAST program '" + input(ctx, "program") + "'");
  return *p;
}

StepResult esearch(NcbiToolbox& tb, const StepContext& ctx) {
  EutilsRequest req{EutilsUtil::esearch, input(ctx, "db"), {{"term", input(ctx, "term")}}};
  if (auto retmax = optional_input(ctx, "retmax"); !retmax.empty()) req.params["retmax"] = retmax;
  const auto resp = tb.eutils_call(req);
  const auto ids = esearch_ids(resp.body);
  StepResult r;
  r.value.text = text::join(ids, ",");
  r.value.fields = {{"ids", r.value.text}, {"first_id", ids.front()}, {"count", std::to_string(esearch_count(resp.body))}};
  r.raw_output = resp.body;
  r.note = provenance(resp);
  return r;
}

StepResult fetch_document(NcbiToolbox& tb, const StepContext& ctx, EutilsUtil util) {
  EutilsRequest req{util, input(ctx, "db"), {{"id", input(ctx, "id")}}};
  for (const char* opt : {"retmode", "rettype"})
    if (auto v = optional_input(ctx, opt); !v.empty()) req.params[opt] = v;
  const auto resp = tb.eutils_call(req);
  StepResult r;
  r.value.text = resp.body;
  r.raw_output = resp.body;
  r.note = provenance(resp);
  return r;
}

StepResult blast_submit(NcbiToolbox& tb, const StepContext& ctx) {
  BlastJob job;
  job.program = program_of(ctx);
  job.database = input(ctx, "database");
  job.sequence = input(ctx, "sequence");
  job = tb.blast_submit(std::move(job));
  StepResult r;
  r.value.text = job.rid;
  r.value.fields = {{"rid", job.rid}, {"rtoe", std::to_string(job.rtoe_s)}};
  r.raw_output = "RID=" + job.rid + " RTOE=" + std::to_string(job.rtoe_s);
  return r;
}

StepResult blast_poll(NcbiToolbox& tb, const StepContext& ctx) {
  BlastJob job;
  job.program = program_of(ctx);
  job.database = input(ctx, "database");
  job.sequence = input(ctx, "sequence");
  job.rid = input(ctx, "rid");
  job.status = BlastStatus::Waiting;
  job = tb.blast_poll(std::move(job));
  if (job.status != BlastStatus::Ready) throw Error("BLAST search " + job.rid + " failed");
  StepResult r;
  r.value.text = job.report;
  r.value.fields = {{"status", std::string(to_string(job.status))}};
  r.raw_output = job.report;
  r.excluded_wait_ms = job.waited_ms;
  r.note = job.report_from_cache ? "cache" : "polls=" + std::to_string(job.polls);
  return r;
}

StepResult top_hit(const StepContext& ctx) {
  const auto hit = parse_blast_top_hit(input(ctx, "report"));
  StepResult r;
  r.value.text = hit.chromosome.empty() ? hit.organism : render_coordinates(hit);
  r.value.fields = {{"chromosome", hit.chromosome},
                    {"start", std::to_string(hit.start)},
                    {"end", std::to_string(hit.end)},
                    {"organism", hit.organism}};
  r.raw_output = hit.accession + " " + hit.title;
  return r;
}

StepResult table_lookup(const LookupTables& tables, const StepContext& ctx) {
  const auto& table = input(ctx, "table");
  const auto& key = input(ctx, "key");
  if (!tables.has_table(table)) throw PreconditionError("lookup table '" + table + "' is not configured");
  auto v = tables.lookup(table, key);
  if (!v) throw Error("table '" + table + "' has no entry for '" + key + "'");
  StepResult r;
  r.value.text = *v;
  r.raw_output = *v;
  return r;
}

StepResult regex_capture(const StepContext& ctx) {
  const std::regex re(input(ctx, "pattern"));
  const auto& subject = input(ctx, "text");
  std::smatch m;
  if (!std::regex_search(subject, m, re)) throw Error("pattern did not match '" + subject + "'");
  StepResult r;
  r.value.text = m.size() > 1 ? m[1].str() : m[0].str();
  r.raw_output = r.value.text;
  return r;
}

}  // namespace

HandlerTable make_tool_handlers(std::shared_ptr<NcbiToolbox> toolbox, std::shared_ptr<const LookupTables> tables) {
  if (!toolbox || !tables) throw PreconditionError("tool handlers need a toolbox and lookup tables");
  HandlerTable h;
  h.set("eutils.esearch", [toolbox](const StepContext& c) { return esearch(*toolbox, c); });
  h.set("eutils.esummary", [toolbox](const StepContext& c) { return fetch_document(*toolbox, c, EutilsUtil::esummary); });
  h.set("eutils.efetch", [toolbox](const StepContext& c) { return fetch_document(*toolbox, c, EutilsUtil::efetch); });
  h.set("blast.submit", [toolbox](const StepContext& c) { return blast_submit(*toolbox, c); });
  h.set("blast.poll", [toolbox](const StepContext& c) { return blast_poll(*toolbox, c); });
  h.set("blast.top_hit", [](const StepContext& c) { return top_hit(c); });
  h.set("table.lookup", [tables](const StepContext& c) { return table_lookup(*tables, c); });
  h.set("regex.capture", [](const StepContext& c) { return regex_capture(c); });
  return h;
}

}  // namespace nba
