#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "nba/eval/dataset.hpp"
#include "nba/ncbi/documents.hpp"
#include "nba/ncbi/toolbox.hpp"
#include "nba/sandbox/mock_ncbi.hpp"
#include "nba/sandbox/server.hpp"

namespace nba {
namespace {

namespace fs = std::filesystem;
using sandbox::make_response;

std::shared_ptr<const sandbox::World> world() {
  static auto w = std::make_shared<const sandbox::World>(sandbox::generate_world());
  return w;
}

/// Fails the test on any request: mounted where a run must stay off the wire.
class SocketGuard final : public HttpTransport {
 public:
  HttpResponse send(const HttpRequest& r) override {
    ADD_FAILURE() << "unexpected network request: " << r.url;
    ++calls;
    return {599, {}, {}};
  }
  int calls = 0;
};

class ScriptedTransport final : public HttpTransport {
 public:
  explicit ScriptedTransport(std::vector<HttpResponse> script) : responder(std::move(script)) {}
  HttpResponse send(const HttpRequest& r) override { return responder(r); }
  sandbox::ScriptedResponder responder;
};

struct Rig {
  std::shared_ptr<ManualClock> clock = std::make_shared<ManualClock>();
  std::shared_ptr<sandbox::MockNcbi> mock;
  std::shared_ptr<CountingTransport> wire;
  std::unique_ptr<NcbiToolbox> toolbox;

  explicit Rig(ToolboxConfig cfg = {}, std::shared_ptr<FixtureStore> fixtures = nullptr, int waiting_polls = 1) {
    mock = std::make_shared<sandbox::MockNcbi>(world(), waiting_polls);
    wire = std::make_shared<CountingTransport>(std::make_shared<sandbox::MockNcbiTransport>(mock));
    cfg.rate_cap = cfg.rate_cap.value_or(1000);
    toolbox = std::make_unique<NcbiToolbox>(cfg, wire, clock, fixtures);
  }
};

const sandbox::Gene& coding_gene() {
  for (const auto& g : world()->genes)
    if (g.type == "protein-coding" && g.chromosome.find(',') == std::string::npos) return g;
  return world()->genes.front();
}

fs::path temp_dir(const std::string& name) {
  auto p = fs::temp_directory_path() / ("nba_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ----- canonical keys ---------------------------------------------------------

TEST(CanonicalKey, InvariantOverRandomPermutations) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 1000; ++i) {
    Params p;
    const auto n = 1 + rng() % 8;
    for (std::size_t k = 0; k < n; ++k) p.push_back({"k" + std::to_string(rng() % 10), std::to_string(rng() % 50)});
    const auto key = canonical_key("eutils", "esummary", p);
    std::shuffle(p.begin(), p.end(), rng);
    ASSERT_EQ(canonical_key("eutils", "esummary", p), key);
  }
}

TEST(CanonicalKey, NormalizesCaseWhitespaceAndCredentials) {
  const auto a = canonical_key("eutils", "esearch", {{"db", "gene"}, {"term", "LMP10[sym]"}, {"retmode", "json"}});
  const auto b = canonical_key("EUTILS", "esearch",
                               {{"RetMode", "JSON"}, {" term", "LMP10[sym] "}, {"DB", "Gene"}, {"api_key", "s3cret"},
                                {"tool", "x"}, {"email", "a@b"}});
  EXPECT_EQ(a, b);
  EXPECT_EQ(b.find("s3cret"), std::string::npos);
  // Free text keeps its case: symbols are case-significant in queries.
  EXPECT_NE(canonical_key("eutils", "esearch", {{"term", "lmp10"}}), canonical_key("eutils", "esearch", {{"term", "LMP10"}}));
  EXPECT_TRUE(is_credential_param("api_key"));
  EXPECT_FALSE(is_credential_param("term"));
}

// ----- cache --------------------------------------------------------------------

TEST(ResponseCache, PutGetAndExpiry) {
  auto clock = std::make_shared<ManualClock>();
  ResponseCache cache(clock);
  cache.put("k", {"body", 1, false, false, "u"}, Millis(1000));
  auto hit = cache.get("k");
  ASSERT_TRUE(hit);
  EXPECT_EQ(hit->body, "body");
  EXPECT_TRUE(hit->from_cache);
  cache.put("k", {"newer", 2, false, false, "u"}, Millis(1000));
  EXPECT_EQ(cache.get("k")->body, "newer");
  clock->advance(Millis(1000));
  EXPECT_FALSE(cache.get("k"));
  cache.put("forever", {"b", 0, false, false, ""}, std::nullopt);
  clock->advance(Millis(1'000'000'000));
  EXPECT_TRUE(cache.get("forever"));
  EXPECT_FALSE(cache.get("absent"));
}

TEST(ResponseCache, ConcurrentReadersAndWriters) {
  ResponseCache cache(std::make_shared<ManualClock>());
  std::vector<std::thread> pool;
  for (int w = 0; w < 8; ++w)
    pool.emplace_back([&, w] {
      for (int i = 0; i < 500; ++i) {
        const auto key = "k" + std::to_string(i % 37);
        cache.put(key, {key, w, false, false, ""}, std::nullopt);
        auto v = cache.get(key);
        ASSERT_TRUE(v);
        ASSERT_EQ(v->body, key);
      }
    });
  for (auto& t : pool) t.join();
  EXPECT_EQ(cache.size(), 37u);
}

// ----- rate limiter -------------------------------------------------------------

std::size_t max_in_window(std::vector<std::int64_t> times, std::int64_t window) {
  std::sort(times.begin(), times.end());
  std::size_t best = 0, lo = 0;
  for (std::size_t hi = 0; hi < times.size(); ++hi) {
    while (times[hi] - times[lo] >= window) ++lo;
    best = std::max(best, hi - lo + 1);
  }
  return best;
}

TEST(RateLimiter, NeverExceedsCapInAnyRollingSecond) {
  for (std::size_t cap : {1u, 3u, 10u}) {
    auto clock = std::make_shared<ManualClock>();
    RateLimiter limiter(cap, clock);
    std::vector<std::int64_t> grants;
    for (int i = 0; i < 200; ++i) {
      limiter.acquire();
      grants.push_back(clock->monotonic_ms());
      clock->advance(Millis(i % 7 == 0 ? 113 : 1));
    }
    EXPECT_LE(max_in_window(grants, 1000), cap);
    EXPECT_EQ(limiter.granted(), 200u);
  }
}

TEST(RateLimiter, FirstBurstIsImmediate) {
  auto clock = std::make_shared<ManualClock>();
  RateLimiter limiter(3, clock);
  for (int i = 0; i < 3; ++i) limiter.acquire();
  EXPECT_EQ(clock->total_slept_ms(), 0);
  limiter.acquire();
  EXPECT_GE(clock->total_slept_ms(), 1000);
}

TEST(RateLimiter, HoldsUnderRealThreads) {
  constexpr std::size_t cap = 10;
  RateLimiter limiter(cap, std::make_shared<SystemClock>());
  std::mutex mu;
  std::vector<std::int64_t> grants;
  const auto stop = std::chrono::steady_clock::now() + std::chrono::milliseconds(2500);
  std::vector<std::thread> pool;
  for (int w = 0; w < 8; ++w)
    pool.emplace_back([&] {
      while (std::chrono::steady_clock::now() < stop) {
        limiter.acquire();
        const auto t = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now().time_since_epoch())
                           .count();
        std::lock_guard lock(mu);
        grants.push_back(t);
      }
    });
  for (auto& t : pool) t.join();
  EXPECT_LE(max_in_window(grants, 1000), cap);
  EXPECT_GE(grants.size(), cap * 2);
}

TEST(RateLimiter, DefaultsFollowNcbiPolicy) {
  EXPECT_EQ(default_ncbi_rate_cap(false), 3u);
  EXPECT_EQ(default_ncbi_rate_cap(true), 10u);
  Rig anonymous;
  ToolboxConfig keyed;
  keyed.api_key = "k";
  NcbiToolbox a({}, std::make_shared<SocketGuard>(), std::make_shared<ManualClock>());
  NcbiToolbox b(keyed, std::make_shared<SocketGuard>(), std::make_shared<ManualClock>());
  EXPECT_EQ(a.rate_limiter().cap(), 3u);
  EXPECT_EQ(b.rate_limiter().cap(), 10u);
}

// ----- E-utils ------------------------------------------------------------------

TEST(Eutils, RequestValidation) {
  EXPECT_THROW((EutilsRequest{EutilsUtil::esearch, "gene", {}}.validate()), PreconditionError);
  EXPECT_THROW((EutilsRequest{EutilsUtil::esummary, "gene", {}}.validate()), PreconditionError);
  EXPECT_THROW((EutilsRequest{EutilsUtil::efetch, "", {{"id", "1"}}}.validate()), PreconditionError);
  EXPECT_NO_THROW((EutilsRequest{EutilsUtil::esearch, "gene", {{"term", "x"}}}.validate()));
  EXPECT_EQ((EutilsRequest{EutilsUtil::esearch, "gene", {{"term", "x"}}}.effective_params().at("retmode")), "json");
  EXPECT_EQ((EutilsRequest{EutilsUtil::efetch, "gene", {{"id", "1"}}}.effective_params().at("retmode")), "xml");
}

TEST(Eutils, SymbolSearchFindsGeneAndSecondCallIsCached) {
  Rig rig;
  const auto& g = coding_gene();
  EutilsRequest req{EutilsUtil::esearch, "gene", {{"term", g.symbol + "[sym] AND human[orgn]"}}};
  const auto first = rig.toolbox->eutils_call(req);
  EXPECT_FALSE(first.from_cache);
  EXPECT_EQ(esearch_ids(first.body).front(), g.uid);
  const auto second = rig.toolbox->eutils_call(req);
  EXPECT_TRUE(second.from_cache);
  EXPECT_EQ(second.body, first.body);
  EXPECT_EQ(rig.wire->count(), 1u);
  EXPECT_EQ(rig.toolbox->cache_hits(), 1u);
}

TEST(Eutils, AliasResolvesToOfficialSymbol) {
  Rig rig;
  const sandbox::Gene* g = nullptr;
  for (const auto& x : world()->genes)
    if (!x.aliases.empty() && x.type == "protein-coding") {
      g = &x;
      break;
    }
  ASSERT_NE(g, nullptr);
  const auto ids = esearch_ids(
      rig.toolbox->eutils_call({EutilsUtil::esearch, "gene", {{"term", g->aliases.front() + "[sym] AND human[orgn]"}}}).body);
  ASSERT_FALSE(ids.empty());
  const auto doc = rig.toolbox->eutils_call({EutilsUtil::esummary, "gene", {{"id", ids.front()}}}).body;
  EXPECT_EQ(extract_field("official_symbol", doc, g->aliases.front()), g->symbol);
}

TEST(Eutils, EmptySearchIsEmptyResult) {
  Rig rig;
  EXPECT_THROW(rig.toolbox->eutils_call({EutilsUtil::esearch, "gene", {{"term", "NOSUCHGENE999[sym]"}}}), EmptyResult);
}

TEST(Eutils, HttpErrorsCarryStatus) {
  auto t = std::make_shared<ScriptedTransport>(std::vector<HttpResponse>{make_response(400, "bad")});
  NcbiToolbox tb({}, t, std::make_shared<ManualClock>());
  try {
    tb.eutils_call({EutilsUtil::esummary, "gene", {{"id", "1"}}});
    FAIL();
  } catch (const HttpError& e) {
    EXPECT_EQ(e.status(), 400);
  }
  EXPECT_EQ(t->responder.calls(), 1u);
}

TEST(Eutils, TransientStatusesAreRetried) {
  Rig ok;
  const auto body = ok.toolbox->eutils_call({EutilsUtil::esummary, "gene", {{"id", coding_gene().uid}}}).body;
  auto t = std::make_shared<ScriptedTransport>(
      std::vector<HttpResponse>{make_response(429), make_response(503), make_response(200, body)});
  NcbiToolbox tb({}, t, std::make_shared<ManualClock>());
  EXPECT_EQ(tb.eutils_call({EutilsUtil::esummary, "gene", {{"id", coding_gene().uid}}}).body, body);
  EXPECT_EQ(t->responder.calls(), 3u);
}

TEST(Eutils, SourceUrlReproducesRequestWithoutCredentials) {
  ToolboxConfig cfg;
  cfg.api_key = "SECRETKEY";
  cfg.email = "me@example.org";
  Rig rig(cfg);
  const auto& g = coding_gene();
  const auto resp = rig.toolbox->eutils_call({EutilsUtil::esummary, "gene", {{"id", g.uid}}});
  EXPECT_EQ(resp.source_url.find("SECRETKEY"), std::string::npos);
  EXPECT_EQ(resp.source_url.find("me@example.org"), std::string::npos);
  const auto q = resp.source_url.find('?');
  ASSERT_NE(q, std::string::npos);
  EXPECT_EQ(resp.source_url.substr(0, q), cfg.eutils_base + "/esummary.fcgi");
  const auto params = parse_query(resp.source_url.substr(q + 1));
  EXPECT_EQ(canonical_key("eutils", "esummary", params),
            canonical_key("eutils", "esummary", {{"db", "gene"}, {"id", g.uid}, {"retmode", "json"}}));
  EXPECT_NE(rig.mock->requests(), 0u);
}

// ----- BLAST --------------------------------------------------------------------

TEST(Blast, NormalizeDna) {
  EXPECT_EQ(normalize_dna("acgt nacgt\nacg"), "ACGTNACGTACG");
  EXPECT_THROW(normalize_dna("ACGT"), PreconditionError);
  EXPECT_THROW(normalize_dna("ACGTACGTACGTXX"), PreconditionError);
}

TEST(Blast, ParsersRejectGarbage) {
  EXPECT_THROW(parse_put_response("<html>nothing here</html>"), RidParseError);
  EXPECT_THROW(parse_search_info("no status"), ParseError);
  EXPECT_EQ(parse_search_info("QBlastInfoBegin\n    Status=UNKNOWN\nQBlastInfoEnd"), BlastStatus::Failed);
  EXPECT_EQ(parse_search_info("QBlastInfoBegin\n    Status=WAITING\nQBlastInfoEnd"), BlastStatus::Waiting);
}

BlastJob human_job(const std::string& seq) {
  BlastJob job;
  job.program = BlastProgram::megablast;
  job.database = "GCF_000001405.40_top_level";
  job.sequence = seq;
  return job;
}

TEST(Blast, SubmitWaitReadyAndCachedRepeat) {
  Rig rig;
  const auto& seq = world()->alignments.front().sequence;
  auto job = rig.toolbox->blast_submit(human_job(seq));
  EXPECT_FALSE(job.rid.empty());
  EXPECT_EQ(job.status, BlastStatus::Waiting);
  const auto after_put = rig.wire->count();

  auto again = rig.toolbox->blast_submit(human_job(seq));
  EXPECT_EQ(again.rid, job.rid);
  EXPECT_EQ(rig.wire->count(), after_put);  // no second Put

  job = rig.toolbox->blast_poll(job);
  EXPECT_EQ(job.status, BlastStatus::Ready);
  EXPECT_EQ(job.polls, 2);  // WAITING, then READY
  EXPECT_FALSE(job.report.empty());
  EXPECT_EQ(job.waited_ms, 10'000);

  const auto before = rig.wire->count();
  auto cached = rig.toolbox->blast_poll(again);
  EXPECT_EQ(cached.status, BlastStatus::Ready);
  EXPECT_TRUE(cached.report_from_cache);
  EXPECT_EQ(cached.report, job.report);
  EXPECT_EQ(rig.wire->count(), before);
}

TEST(Blast, PollPreconditionsAndBudget) {
  Rig rig;
  EXPECT_THROW(rig.toolbox->blast_poll(human_job(world()->alignments.front().sequence)), PreconditionError);
  BlastJob submitted = human_job(world()->alignments.front().sequence);
  submitted.rid = "X";
  EXPECT_THROW(rig.toolbox->blast_submit(submitted), PreconditionError);
  EXPECT_THROW(rig.toolbox->blast_submit(human_job("ACGT")), PreconditionError);

  ToolboxConfig cfg;
  cfg.poll_budget = 2;
  Rig slow(cfg, nullptr, /*waiting_polls=*/5);
  auto job = slow.toolbox->blast_submit(human_job(world()->alignments.front().sequence));
  EXPECT_THROW(slow.toolbox->blast_poll(job), PollBudgetExhausted);
}

TEST(Blast, UnknownRidFails) {
  Rig rig;
  BlastJob job = human_job(world()->alignments.front().sequence);
  job.rid = "NOTAREALRID";
  job.status = BlastStatus::Waiting;
  EXPECT_EQ(rig.toolbox->blast_poll(job).status, BlastStatus::Failed);
}

TEST(Blast, TopHitMatchesRefinedGold) {
  Rig rig;
  std::size_t checked = 0;
  for (const auto& item : world()->dataset) {
    if (item.task != TaskType::AlignHuman || checked >= 10) continue;
    const auto seq = item.question.substr(item.question.rfind(':') + 1);
    auto job = rig.toolbox->blast_poll(rig.toolbox->blast_submit(human_job(seq)));
    ASSERT_EQ(job.status, BlastStatus::Ready);
    const auto hit = parse_blast_top_hit(job.report);
    EXPECT_EQ(render_coordinates(hit), item.gold.front()) << item.id;
    EXPECT_LE(hit.start, hit.end);
    EXPECT_EQ(hit.organism, "Homo sapiens");
    ++checked;
  }
  EXPECT_EQ(checked, 10u);
}

TEST(Blast, TopHitErrors) {
  EXPECT_THROW(parse_blast_top_hit(R"({"BlastOutput2":[{"report":{"results":{"search":{"hits":[]}}}}]})"), NoHits);
  Rig rig;
  auto job = rig.toolbox->blast_poll(rig.toolbox->blast_submit(human_job(world()->alignments.front().sequence)));
  EXPECT_THROW(parse_blast_top_hit(job.report.substr(0, job.report.size() / 2)), ParseError);
  EXPECT_THROW(parse_blast_top_hit(""), ParseError);
}

// ----- fixtures and offline replay -------------------------------------------------

TEST(FixtureStore, PutFindAndTamperDetection) {
  const auto dir = temp_dir("fixtures_basic");
  {
    FixtureStore store(dir);
    store.put("eutils:esearch?term=a", "body-a", "https://x/esearch.fcgi?term=a");
    EXPECT_TRUE(store.contains("eutils:esearch?term=a"));
    EXPECT_EQ(store.find("eutils:esearch?term=a")->body, "body-a");
    EXPECT_FALSE(store.find("missing"));
  }
  {
    FixtureStore reopened(dir);
    EXPECT_EQ(reopened.size(), 1u);
    EXPECT_EQ(reopened.find("eutils:esearch?term=a")->source_url, "https://x/esearch.fcgi?term=a");
    for (const auto& e : fs::directory_iterator(dir / "bodies")) std::ofstream(e.path()) << "edited";
    EXPECT_THROW(reopened.find("eutils:esearch?term=a"), SchemaError);
  }
  fs::remove_all(dir);
}

std::vector<EutilsRequest> capture_requests() {
  std::vector<EutilsRequest> reqs;
  for (std::size_t i = 0; i < 30; ++i) {
    const auto& g = world()->genes[i * 7];
    reqs.push_back({EutilsUtil::esummary, "gene", {{"id", g.uid}}});
    reqs.push_back({EutilsUtil::efetch, "gene", {{"id", g.uid}}});
  }
  return reqs;
}

TEST(FixtureStore, InterruptedCaptureResumesToIdenticalManifest) {
  const auto reqs = capture_requests();
  ToolboxConfig cap;
  cap.capture = true;

  const auto full = temp_dir("capture_full");
  {
    Rig rig(cap, std::make_shared<FixtureStore>(full));
    for (const auto& r : reqs) rig.toolbox->eutils_call(r);
    rig.toolbox->fixtures()->flush();
  }

  // Crash midway: snapshot the directory while the capture is still open
  // (bodies and journal on disk, manifest never written).
  const auto live = temp_dir("capture_live");
  const auto crashed = temp_dir("capture_crashed");
  {
    Rig rig(cap, std::make_shared<FixtureStore>(live));
    for (std::size_t i = 0; i < reqs.size() / 2; ++i) rig.toolbox->eutils_call(reqs[i]);
    fs::copy(live, crashed, fs::copy_options::recursive | fs::copy_options::overwrite_existing);
  }
  EXPECT_FALSE(fs::exists(crashed / "manifest.json"));
  {
    auto store = std::make_shared<FixtureStore>(crashed);
    EXPECT_EQ(store->size(), reqs.size() / 2);
    Rig rig(cap, store);
    for (const auto& r : reqs) rig.toolbox->eutils_call(r);
    EXPECT_EQ(rig.wire->count(), reqs.size() - reqs.size() / 2);  // resumed, not redone
    store->flush();
  }
  EXPECT_EQ(slurp(crashed / "manifest.json"), slurp(full / "manifest.json"));
  for (const auto& d : {full, live, crashed}) fs::remove_all(d);
}

TEST(FixtureStore, OfflineReplayWithSocketGuard) {
  const auto dir = temp_dir("offline_replay");
  const auto reqs = capture_requests();
  std::vector<std::string> bodies;
  {
    ToolboxConfig cap;
    cap.capture = true;
    Rig rig(cap, std::make_shared<FixtureStore>(dir));
    for (const auto& r : reqs) bodies.push_back(rig.toolbox->eutils_call(r).body);
  }
  ToolboxConfig off;
  off.offline = true;
  auto guard = std::make_shared<SocketGuard>();
  NcbiToolbox tb(off, guard, std::make_shared<ManualClock>(), std::make_shared<FixtureStore>(dir));
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    const auto r = tb.eutils_call(reqs[i]);
    EXPECT_EQ(r.body, bodies[i]);
    EXPECT_TRUE(r.from_fixture);
  }
  EXPECT_THROW(tb.eutils_call({EutilsUtil::esummary, "gene", {{"id", "999999999"}}}), FixtureMissing);
  EXPECT_EQ(guard->calls, 0);
  EXPECT_EQ(tb.network_requests(), 0u);
  fs::remove_all(dir);
}

TEST(FixtureStore, WaitingPollsAreNeverRecorded) {
  const auto dir = temp_dir("blast_capture");
  ToolboxConfig cap;
  cap.capture = true;
  auto store = std::make_shared<FixtureStore>(dir);
  Rig rig(cap, store, 3);
  rig.toolbox->blast_poll(rig.toolbox->blast_submit(human_job(world()->alignments.front().sequence)));
  store->flush();
  for (const auto& key : store->keys())
    if (key.find("searchinfo") != std::string::npos)
      EXPECT_NE(store->find(key)->body.find("Status=READY"), std::string::npos);
  EXPECT_EQ(store->size(), 3u);  // put, one READY SearchInfo, report
  fs::remove_all(dir);
}

TEST(Toolbox, CacheHitOpensNoSocket) {
  auto mock = std::make_shared<sandbox::MockNcbi>(world());
  sandbox::LocalServer server([mock](const HttpRequest& r) { return mock->handle(r); });
  ToolboxConfig cfg;
  cfg.eutils_base = server.base_url() + "/entrez/eutils";
  cfg.blast_base = server.base_url() + "/blast/Blast.cgi";
  cfg.rate_cap = 100;
  cfg.poll_interval = Millis(1);
  NcbiToolbox tb(cfg, std::make_shared<HttplibTransport>(), std::make_shared<SystemClock>());
  EutilsRequest req{EutilsUtil::esummary, "gene", {{"id", coding_gene().uid}}};
  tb.eutils_call(req);
  auto job = tb.blast_poll(tb.blast_submit(human_job(world()->alignments[1].sequence)));
  ASSERT_EQ(job.status, BlastStatus::Ready);
  const auto sockets = server.requests();
  EXPECT_TRUE(tb.eutils_call(req).from_cache);
  EXPECT_TRUE(tb.blast_poll(tb.blast_submit(human_job(world()->alignments[1].sequence))).report_from_cache);
  EXPECT_EQ(server.requests(), sockets);
}

// ----- documents ----------------------------------------------------------------

TEST(Documents, FieldsFromMockRecords) {
  Rig rig;
  const auto& g = coding_gene();
  const auto summary = rig.toolbox->eutils_call({EutilsUtil::esummary, "gene", {{"id", g.uid}}}).body;
  EXPECT_EQ(extract_field("official_symbol", summary), g.symbol);
  EXPECT_EQ(extract_field("chromosome", summary, g.symbol), "chr" + g.chromosome);
  EXPECT_EQ(extract_field("chromosome", summary, "SOMEOTHERGENE"), std::nullopt);
  const auto fetched = rig.toolbox->eutils_call({EutilsUtil::efetch, "gene", {{"id", g.uid}}}).body;
  EXPECT_EQ(extract_field("protein_coding", fetched), "TRUE");
  EXPECT_THROW(extract_field("no_such_goal", summary), PreconditionError);
  EXPECT_THROW(extract_field("official_symbol", "{not json"), ParseError);
}

}  // namespace
}  // namespace nba
