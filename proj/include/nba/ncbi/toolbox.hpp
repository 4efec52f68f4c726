#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "nba/common/clock.hpp"
#include "nba/common/http.hpp"
#include "nba/common/log.hpp"
#include "nba/ncbi/blast.hpp"
#include "nba/ncbi/cache.hpp"
#include "nba/ncbi/canonical.hpp"
#include "nba/ncbi/errors.hpp"
#include "nba/ncbi/eutils.hpp"
#include "nba/ncbi/fixture_store.hpp"
#include "nba/ncbi/rate_limiter.hpp"

namespace nba {

struct ToolboxConfig {
  std::string eutils_base = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils";
  std::string blast_base = "https://blast.ncbi.nlm.nih.gov/blast/Blast.cgi";
  std::string api_key;  // appended to E-utils requests, never recorded
  std::string tool = "nano-bio-agent";
  std::string email;
  std::optional<std::size_t> rate_cap;  // default from the API key
  Millis poll_interval{10'000};
  int poll_budget = 12;
  Millis eutils_ttl{7LL * 24 * 3600 * 1000};
  Millis rid_ttl{24LL * 3600 * 1000};
  Millis request_timeout{60'000};
  int max_http_attempts = 3;  // 429/5xx only
  Millis http_backoff{1'000};
  /// Never dispatch; a request missing from cache and fixtures throws FixtureMissing.
  bool offline = false;
  /// Record every network response that may be replayed into the fixture store.
  bool capture = false;
};

/// NCBI E-utils and BLAST URL API clients sharing one cache, one rate
/// limiter and an optional fixture store. Shareable across workers.
///
/// Lookup order for every request: memory cache, fixture store, network.
class NcbiToolbox {
 public:
  NcbiToolbox(ToolboxConfig config, std::shared_ptr<HttpTransport> transport, std::shared_ptr<Clock> clock,
              std::shared_ptr<FixtureStore> fixtures = nullptr, std::shared_ptr<LogSink> log = nullptr);

  /// Throws HttpError, Timeout, EmptyResult (no records), ParseError.
  ToolResponse eutils_call(const EutilsRequest& req);

  /// Put. A repeated (program, database, sequence) returns the cached RID.
  BlastJob blast_submit(BlastJob job);
  /// Get/SearchInfo until READY or FAILED, then fetches the JSON2_S report.
  /// Once a report exists for (program, database, sequence), polling is
  /// served entirely from cache.
  BlastJob blast_poll(BlastJob job);

  std::size_t network_requests() const { return network_.load(); }
  std::size_t cache_hits() const { return cache_hits_.load(); }
  std::size_t fixture_hits() const { return fixture_hits_.load(); }
  const ToolboxConfig& config() const { return config_; }
  ResponseCache& cache() { return cache_; }
  RateLimiter& rate_limiter() { return limiter_; }
  FixtureStore* fixtures() { return fixtures_.get(); }

 private:
  struct Call {
    std::string service;   // eutils | blast
    std::string endpoint;  // esearch | put | get ...
    std::string url;       // without query
    Params params;
    bool post = false;
    std::optional<Millis> ttl;
    /// Decides whether a network body may be cached/recorded; may throw
    /// to reject the body outright.
    std::function<bool(const std::string&)> storable;
  };
  ToolResponse dispatch(const Call& call);
  HttpResponse send_with_retry(const HttpRequest& req);
  std::string report_key(const BlastJob& job) const;
  void log_request(const Call& call, const std::string& key, const char* source, std::int64_t elapsed_ms);

  ToolboxConfig config_;
  std::shared_ptr<HttpTransport> transport_;
  std::shared_ptr<Clock> clock_;
  std::shared_ptr<FixtureStore> fixtures_;
  std::shared_ptr<LogSink> log_;
  ResponseCache cache_;
  RateLimiter limiter_;
  std::atomic<std::size_t> network_{0};
  std::atomic<std::size_t> cache_hits_{0};
  std::atomic<std::size_t> fixture_hits_{0};
};

}  // namespace nba
