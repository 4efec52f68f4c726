#include "nba/ncbi/toolbox.hpp"

#include "nba/common/text.hpp"
#include "nba/ncbi/documents.hpp"

namespace nba {

namespace {

std::string with_query(const std::string& base, const Params& params) {
  return params.empty() ? base : base + "?" + build_query(params);
}

Params public_params(const Params& params) {
  Params out;
  for (const auto& p : params)
    if (!is_credential_param(p.first)) out.push_back(p);
  return out;
}

}  // namespace

NcbiToolbox::NcbiToolbox(ToolboxConfig config, std::shared_ptr<HttpTransport> transport, std::shared_ptr<Clock> clock,
                         std::shared_ptr<FixtureStore> fixtures, std::shared_ptr<LogSink> log)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      clock_(std::move(clock)),
      fixtures_(std::move(fixtures)),
      log_(log ? std::move(log) : std::make_shared<NullLogSink>()),
      cache_(clock_),
      limiter_(config_.rate_cap.value_or(default_ncbi_rate_cap(!config_.api_key.empty())), clock_) {
  if (!transport_) throw PreconditionError("toolbox needs a transport");
  if (config_.capture && !fixtures_) throw ConfigError("fixture capture needs a fixture directory");
  if (config_.poll_budget < 1) throw ConfigError("BLAST poll budget must be at least 1");
  if (config_.max_http_attempts < 1) throw ConfigError("HTTP attempts must be at least 1");
}

void NcbiToolbox::log_request(const Call& call, const std::string& key, const char* source, std::int64_t elapsed_ms) {
  log_->write({{"event", "ncbi_request"},
               {"service", call.service},
               {"endpoint", call.endpoint},
               {"key", key},
               {"source", source},
               {"elapsed_ms", elapsed_ms}});
}

HttpResponse NcbiToolbox::send_with_retry(const HttpRequest& req) {
  for (int attempt = 1;; ++attempt) {
    limiter_.acquire();
    network_.fetch_add(1);
    HttpResponse resp;
    try {
      resp = transport_->send(req);
    } catch (const TransportError& e) {
      if (e.timed_out()) throw Timeout("NCBI request timed out: " + std::string(e.what()));
      throw;
    }
    const bool transient = resp.status == 429 || resp.status >= 500;
    if (!transient || attempt >= config_.max_http_attempts) return resp;
    clock_->sleep_for(config_.http_backoff * (1 << (attempt - 1)));
  }
}

ToolResponse NcbiToolbox::dispatch(const Call& call) {
  const std::string key = canonical_key(call.service, call.endpoint, call.params);
  const auto start = clock_->monotonic_ms();
  if (auto hit = cache_.get(key)) {
    cache_hits_.fetch_add(1);
    log_request(call, key, "cache", 0);
    return *hit;
  }
  const std::string source_url = with_query(call.url, public_params(call.params));
  if (fixtures_) {
    if (auto rec = fixtures_->find(key)) {
      fixture_hits_.fetch_add(1);
      ToolResponse resp{rec->body, clock_->wall_ms(), false, true, rec->source_url};
      cache_.put(key, resp, call.ttl);
      log_request(call, key, "fixture", 0);
      return resp;
    }
  }
  if (config_.offline) throw FixtureMissing("offline and no fixture recorded for " + key);

  Params wire = call.params;
  if (call.service == "eutils") {
    if (!config_.api_key.empty()) wire.emplace_back("api_key", config_.api_key);
    if (!config_.tool.empty()) wire.emplace_back("tool", config_.tool);
    if (!config_.email.empty()) wire.emplace_back("email", config_.email);
  }
  HttpRequest req;
  req.timeout = config_.request_timeout;
  if (call.post) {
    req.method = "POST";
    req.url = call.url;
    req.body = build_query(wire);
    req.content_type = "application/x-www-form-urlencoded";
  } else {
    req.url = with_query(call.url, wire);
  }
  const HttpResponse http = send_with_retry(req);
  if (http.status != 200)
    throw HttpError(http.status, "NCBI " + call.endpoint + " returned HTTP " + std::to_string(http.status));

  ToolResponse resp{http.body, clock_->wall_ms(), false, false, source_url};
  const bool store = call.storable ? call.storable(http.body) : true;
  if (store) {
    if (config_.capture) fixtures_->put(key, http.body, source_url);
    cache_.put(key, resp, call.ttl);
  }
  log_request(call, key, "network", clock_->monotonic_ms() - start);
  return resp;
}

ToolResponse NcbiToolbox::eutils_call(const EutilsRequest& req) {
  req.validate();
  Call call;
  call.service = "eutils";
  call.endpoint = std::string(to_string(req.util));
  call.url = config_.eutils_base + "/" + call.endpoint + ".fcgi";
  for (const auto& [k, v] : req.effective_params()) call.params.emplace_back(k, text::trim(v));
  call.ttl = config_.eutils_ttl;
  call.storable = [](const std::string& body) { return !text::trim(body).empty(); };
  ToolResponse resp = dispatch(call);

  const auto retmode = req.effective_params().at("retmode");
  if (text::trim(resp.body).empty()) throw EmptyResult(call.endpoint + " returned an empty body");
  if (req.util == EutilsUtil::esearch && retmode == "json" && esearch_ids(resp.body).empty())
    throw EmptyResult("esearch " + req.db + " found no records for '" + req.params.at("term") + "'");
  if (req.util == EutilsUtil::esummary && retmode == "json" && esummary_record_count(resp.body) == 0)
    throw EmptyResult("esummary " + req.db + " returned no records for id " + req.params.at("id"));
  return resp;
}

std::string NcbiToolbox::report_key(const BlastJob& job) const {
  return canonical_key("blast", "report",
                       {{"program", std::string(to_string(job.program))},
                        {"database", job.database},
                        {"sequence", job.sequence}});
}

namespace {

Params put_params(const BlastJob& job) {
  Params p = {{"CMD", "Put"}, {"DATABASE", job.database}, {"QUERY", job.sequence}};
  if (job.program == BlastProgram::megablast) {
    p.emplace_back("PROGRAM", "blastn");
    p.emplace_back("MEGABLAST", "on");
  } else {
    p.emplace_back("PROGRAM", "blastn");
  }
  return p;
}

}  // namespace

BlastJob NcbiToolbox::blast_submit(BlastJob job) {
  if (job.status != BlastStatus::New || !job.rid.empty())
    throw PreconditionError("blast_submit needs a job that has not been submitted");
  if (text::trim(job.database).empty()) throw PreconditionError("blast_submit: database is empty");
  job.sequence = normalize_dna(job.sequence);

  Call call;
  call.service = "blast";
  call.endpoint = "put";
  call.url = config_.blast_base;
  call.params = put_params(job);
  call.post = true;
  call.ttl = config_.rid_ttl;
  call.storable = [](const std::string& body) {
    parse_put_response(body);
    return true;
  };
  const auto resp = dispatch(call);
  const auto receipt = parse_put_response(resp.body);
  job.rid = receipt.rid;
  job.rtoe_s = receipt.rtoe_s;
  job.status = BlastStatus::Waiting;
  return job;
}

BlastJob NcbiToolbox::blast_poll(BlastJob job) {
  if (job.rid.empty()) throw PreconditionError("blast_poll needs a job with a RID");
  if (!job.sequence.empty()) {
    job.sequence = normalize_dna(job.sequence);
    if (auto hit = cache_.get(report_key(job))) {
      cache_hits_.fetch_add(1);
      job.status = BlastStatus::Ready;
      job.report = hit->body;
      job.report_from_cache = true;
      return job;
    }
  }

  for (int poll = 1; poll <= config_.poll_budget; ++poll) {
    Call info;
    info.service = "blast";
    info.endpoint = "get";
    info.url = config_.blast_base;
    info.params = {{"CMD", "Get"}, {"FORMAT_OBJECT", "SearchInfo"}, {"RID", job.rid}};
    info.ttl = config_.rid_ttl;
    // Only a finished search may be replayed; WAITING is a moment in time.
    info.storable = [](const std::string& body) { return parse_search_info(body) == BlastStatus::Ready; };
    const auto status = parse_search_info(dispatch(info).body);
    ++job.polls;
    if (status == BlastStatus::Failed) {
      job.status = BlastStatus::Failed;
      return job;
    }
    if (status == BlastStatus::Ready) {
      Call report;
      report.service = "blast";
      report.endpoint = "get";
      report.url = config_.blast_base;
      report.params = {{"CMD", "Get"}, {"FORMAT_TYPE", "JSON2_S"}, {"RID", job.rid}};
      report.ttl = std::nullopt;
      const auto resp = dispatch(report);
      job.status = BlastStatus::Ready;
      job.report = resp.body;
      job.report_from_cache = resp.from_cache;
      if (!job.sequence.empty()) cache_.put(report_key(job), resp, std::nullopt);
      return job;
    }
    job.status = BlastStatus::Waiting;
    if (poll < config_.poll_budget) {
      clock_->sleep_for(config_.poll_interval);
      job.waited_ms += config_.poll_interval.count();
    }
  }
  throw PollBudgetExhausted("BLAST RID " + job.rid + " still WAITING after " + std::to_string(config_.poll_budget) +
                            " polls");
}

}  // namespace nba
