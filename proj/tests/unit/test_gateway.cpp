#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "nba/gateway/gateway.hpp"
#include "nba/gateway/transcript.hpp"
#include "nba/gateway/truncate.hpp"
#include "nba/sandbox/mock_model.hpp"
#include "nba/sandbox/server.hpp"

namespace nba {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using sandbox::make_response;

const std::string kChatOk =
    R"({"id":"c1","object":"chat.completion","choices":[{"index":0,"message":{"role":"assistant","content":"Answer: chr2"}}]})";

ModelEndpoint endpoint(const std::string& base) {
  ModelEndpoint e;
  e.name = "test";
  e.base_url = base;
  e.model_id = "test-model";
  return e;
}

const std::vector<ChatMessage> kHello = {{"system", "Role: classifier"}, {"user", "hello there"}};

/// In-process scripted transport; records requests.
class Scripted final : public HttpTransport {
 public:
  explicit Scripted(std::vector<HttpResponse> script) : responder_(std::move(script)) {}
  HttpResponse send(const HttpRequest& r) override { return responder_(r); }
  sandbox::ScriptedResponder responder_;
};

class ThrowingTransport final : public HttpTransport {
 public:
  HttpResponse send(const HttpRequest&) override {
    ++calls;
    throw TransportError("connection refused");
  }
  int calls = 0;
};

TEST(EstimateTokens, Examples) {
  EXPECT_EQ(estimate_tokens(0, 4.0), 0u);
  EXPECT_EQ(estimate_tokens(400, 4.0), 100u);
  EXPECT_EQ(estimate_tokens(401, 4.0), 101u);
  EXPECT_THROW(estimate_tokens(10, 0.0), PreconditionError);
  EXPECT_THROW(estimate_tokens(10, -1.0), PreconditionError);
}

TEST(EstimateTokens, MonotoneAndExactAtFourOverRandomLengths) {
  std::mt19937_64 rng(11);
  std::vector<std::uint64_t> lengths(1000);
  for (auto& n : lengths) n = rng() % 5'000'000;
  std::sort(lengths.begin(), lengths.end());
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const auto t = estimate_tokens(lengths[i], 4.0);
    ASSERT_EQ(t, (lengths[i] + 3) / 4) << lengths[i];
    if (i) ASSERT_GE(t, estimate_tokens(lengths[i - 1], 4.0));
  }
}

TEST(EstimateTokens, MonotoneForOtherRatios) {
  std::mt19937_64 rng(12);
  for (double ratio : {1.0, 3.3, 3.9, 4.7, 5.0}) {
    std::uint64_t prev = 0;
    for (std::uint64_t n = 0; n < 2000; n += 1 + rng() % 7) {
      const auto t = estimate_tokens(n, ratio);
      ASSERT_GE(t, prev);
      ASSERT_EQ(t, static_cast<std::uint64_t>(std::ceil(n / ratio)));
      prev = t;
    }
  }
}

TEST(Usage, MakeUsageFollowsRatio) {
  const auto u = make_usage(1000, 37, 4.0, 12, 2);
  EXPECT_EQ(u.est_tokens_in, 250u);
  EXPECT_EQ(u.est_tokens_out, 10u);
  EXPECT_EQ(u.attempts, 2u);
  EXPECT_EQ(usage_from_json(to_json(u)), u);
  EXPECT_DOUBLE_EQ(fit_chars_per_token(4000, 1000), 4.0);
  EXPECT_THROW(fit_chars_per_token(10, 0), PreconditionError);
}

TEST(Truncate, ShortDocumentUnchanged) {
  EXPECT_EQ(truncate_document("abc", 100), "abc");
  const std::string exact(100, 'x');
  EXPECT_EQ(truncate_document(exact, 100), exact);
}

TEST(Truncate, KeepsFirstAndLast400OfTenThousand) {
  std::mt19937_64 rng(13);
  std::string doc(10'000, ' ');
  for (auto& c : doc) c = static_cast<char>('a' + rng() % 26);
  const auto out = truncate_document(doc, 1000);
  EXPECT_LE(out.size(), 1000u);
  EXPECT_EQ(out.substr(0, 400), doc.substr(0, 400));
  EXPECT_EQ(out.substr(out.size() - 400), doc.substr(doc.size() - 400));
  EXPECT_NE(out.find(kElisionMarker), std::string::npos);
}

TEST(Truncate, BudgetNotAboveMarkerIsPrecondition) {
  EXPECT_THROW(truncate_document(std::string(100, 'x'), 10, std::string(20, '.')), PreconditionError);
  EXPECT_THROW(truncate_document("x", kElisionMarker.size()), PreconditionError);
}

TEST(Truncate, IdempotentAndWithinBudgetOnRandomDocuments) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 500; ++i) {
    std::string doc(rng() % 30'000, ' ');
    for (auto& c : doc) c = static_cast<char>(32 + rng() % 95);
    const std::size_t budget = kElisionMarker.size() + 1 + rng() % 12'000;
    const auto once = truncate_document(doc, budget);
    ASSERT_LE(once.size(), budget);
    ASSERT_EQ(truncate_document(once, budget), once);
    if (doc.size() <= budget) ASSERT_EQ(once, doc);
    else ASSERT_NE(once.find(kElisionMarker), std::string::npos);
  }
}

TEST(Endpoint, Invariants) {
  auto e = endpoint("http://localhost/v1");
  EXPECT_NO_THROW(e.validate());
  e.temperature = -0.1;
  EXPECT_THROW(e.validate(), ConfigError);
  e = endpoint("");
  EXPECT_THROW(e.validate(), ConfigError);
  const auto j = to_json(endpoint("http://x/v1"));
  EXPECT_EQ(endpoint_from_json("test", j).base_url, "http://x/v1");
}

TEST(Retry, TwoRateLimitsThenSuccessOverRealServer) {
  auto script = std::make_shared<sandbox::ScriptedResponder>(
      std::vector<HttpResponse>{make_response(429, "{}"), make_response(429, "{}"), make_response(200, kChatOk)});
  sandbox::LocalServer server([script](const HttpRequest& r) { return (*script)(r); });
  auto clock = std::make_shared<ManualClock>();
  ModelGateway gw(std::make_shared<HttplibTransport>(), clock);
  const auto r = gw.chat_complete(endpoint(server.base_url() + "/v1"), kHello);
  EXPECT_EQ(r.text, "Answer: chr2");
  EXPECT_EQ(r.usage.attempts, 3u);
  EXPECT_EQ(script->calls(), 3u);
  EXPECT_EQ(server.requests(), 3u);
  EXPECT_GE(clock->total_slept_ms(), 500 + 1000);  // exponential: base, 2 * base
  EXPECT_EQ(script->seen().front().url.find("/v1/chat/completions") != std::string::npos, true);
}

TEST(Retry, NonRetryableStatusesStopAtOnce) {
  for (int status : {400, 401, 403, 404, 422}) {
    auto script = std::make_shared<sandbox::ScriptedResponder>(
        std::vector<HttpResponse>{make_response(status, R"({"error":"no"})"), make_response(200, kChatOk)});
    sandbox::LocalServer server([script](const HttpRequest& r) { return (*script)(r); });
    ModelGateway gw(std::make_shared<HttplibTransport>(), std::make_shared<ManualClock>());
    if (status == 401 || status == 403)
      EXPECT_THROW(gw.chat_complete(endpoint(server.base_url()), kHello), AuthError);
    else
      EXPECT_THROW(gw.chat_complete(endpoint(server.base_url()), kHello), ModelHttpError);
    EXPECT_EQ(script->calls(), 1u) << status;
  }
}

TEST(Retry, ServerErrorsExhaustConfiguredAttempts) {
  auto t = std::make_shared<Scripted>(std::vector<HttpResponse>{make_response(503)});
  RetryPolicy p;
  p.max_attempts = 4;
  ModelGateway gw(t, std::make_shared<ManualClock>(), p);
  try {
    gw.chat_complete(endpoint("http://x"), kHello);
    FAIL() << "expected ExhaustedRetries";
  } catch (const ExhaustedRetries& e) {
    EXPECT_EQ(e.attempts(), 4u);
  }
  EXPECT_EQ(t->responder_.calls(), 4u);
}

TEST(Retry, TransportErrorsAreRetried) {
  auto t = std::make_shared<ThrowingTransport>();
  ModelGateway gw(t, std::make_shared<ManualClock>());
  EXPECT_THROW(gw.chat_complete(endpoint("http://x"), kHello), ExhaustedRetries);
  EXPECT_EQ(t->calls, 5);
}

TEST(Retry, RetryAfterHeaderIsHonoured) {
  auto t = std::make_shared<Scripted>(
      std::vector<HttpResponse>{make_response(429, "{}", {{"Retry-After", "7"}}), make_response(200, kChatOk)});
  auto clock = std::make_shared<ManualClock>();
  ModelGateway gw(t, clock);
  gw.chat_complete(endpoint("http://x"), kHello);
  EXPECT_GE(clock->total_slept_ms(), 7000);
}

TEST(Chat, PreconditionsAndMalformedResponses) {
  auto t = std::make_shared<Scripted>(std::vector<HttpResponse>{make_response(200, R"({"nope":1})")});
  ModelGateway gw(t, std::make_shared<ManualClock>());
  EXPECT_THROW(gw.chat_complete(endpoint("http://x"), std::vector<ChatMessage>{}), PreconditionError);
  EXPECT_EQ(t->responder_.calls(), 0u);
  EXPECT_THROW(gw.chat_complete(endpoint("http://x"), kHello), ModelResponseError);
}

TEST(Chat, RequestFollowsContractAndUsageCountsCharacters) {
  auto t = std::make_shared<Scripted>(std::vector<HttpResponse>{make_response(200, kChatOk)});
  ModelGateway gw(t, std::make_shared<ManualClock>());
  const auto r = gw.chat_complete(endpoint("http://x/v1/"), kHello);
  const auto req = t->responder_.seen().at(0);
  EXPECT_EQ(req.url, "http://x/v1/chat/completions");
  const auto body = json::parse(req.body);
  EXPECT_EQ(body["model"], "test-model");
  EXPECT_EQ(body["temperature"], 0.0);
  EXPECT_EQ(body["messages"].size(), 2u);
  const std::uint64_t chars_in = std::string("Role: classifier").size() + std::string("hello there").size();
  EXPECT_EQ(r.usage.chars_in, chars_in);
  EXPECT_EQ(r.usage.chars_out, std::string("Answer: chr2").size());
  EXPECT_EQ(r.usage.est_tokens_in, (chars_in + 3) / 4);
  EXPECT_EQ(r.usage.attempts, 1u);
}

TEST(Chat, EveryCallLogsUsage) {
  auto log = std::make_shared<MemoryLogSink>();
  auto t = std::make_shared<Scripted>(std::vector<HttpResponse>{make_response(200, kChatOk)});
  ModelGateway gw(t, std::make_shared<ManualClock>(), {}, log);
  gw.chat_complete(endpoint("http://x"), kHello, "classify");
  auto bad = std::make_shared<Scripted>(std::vector<HttpResponse>{make_response(400)});
  ModelGateway gw2(bad, std::make_shared<ManualClock>(), {}, log);
  EXPECT_THROW(gw2.chat_complete(endpoint("http://x"), kHello), ModelHttpError);
  const auto recs = log->records();
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0]["event"], "model_call");
  EXPECT_EQ(recs[0]["purpose"], "classify");
  EXPECT_EQ(recs[0]["usage"]["attempts"], 1);
  EXPECT_TRUE(recs[0]["usage"].contains("est_tokens_in"));
  EXPECT_EQ(recs[1]["status"], "error");
}

TEST(Embed, SecondCallServedFromCache) {
  auto model = std::make_shared<sandbox::MockModel>();
  auto transport = std::make_shared<CountingTransport>(std::make_shared<sandbox::MockModelTransport>(model));
  ModelGateway gw(transport, std::make_shared<ManualClock>());
  const auto e = endpoint("http://mock/v1");
  const auto a = gw.embed(e, "Which chromosome is ABC1 gene located on human genome?");
  const auto b = gw.embed(e, "Which chromosome is ABC1 gene located on human genome?");
  EXPECT_EQ(a.vector, b.vector);
  EXPECT_FALSE(a.from_cache);
  EXPECT_TRUE(b.from_cache);
  EXPECT_EQ(b.usage.attempts, 0u);
  EXPECT_EQ(transport->count(), 1u);
  EXPECT_EQ(gw.embedding_cache_size(), 1u);
  EXPECT_THROW(gw.embed(e, ""), PreconditionError);
}

TEST(Embed, CacheIsSafeUnderConcurrency) {
  auto model = std::make_shared<sandbox::MockModel>();
  auto transport = std::make_shared<CountingTransport>(std::make_shared<sandbox::MockModelTransport>(model));
  ModelGateway gw(transport, std::make_shared<ManualClock>());
  const auto e = endpoint("http://mock/v1");
  std::vector<std::thread> pool;
  for (int w = 0; w < 8; ++w)
    pool.emplace_back([&, w] {
      for (int i = 0; i < 50; ++i) gw.embed(e, "question " + std::to_string((i + w) % 20));
    });
  for (auto& t : pool) t.join();
  EXPECT_EQ(gw.embedding_cache_size(), 20u);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(gw.embed(e, "question " + std::to_string(i)).from_cache, true);
}

TEST(Transcript, RecordThenReplayIsExact) {
  auto model = std::make_shared<sandbox::MockModel>();
  auto transcript = std::make_shared<Transcript>();
  auto rec = std::make_shared<TranscriptRecordingTransport>(std::make_shared<sandbox::MockModelTransport>(model),
                                                            transcript);
  ModelGateway live(rec, std::make_shared<ManualClock>());
  const auto e = endpoint("http://mock/v1");
  const auto a = live.chat_complete(e, kHello);
  const auto v = live.embed(e, "some text");
  EXPECT_EQ(transcript->size(), 2u);

  const auto path = fs::temp_directory_path() / "nba_transcript_test.json";
  transcript->save(path);
  auto loaded = std::make_shared<const Transcript>(Transcript::load(path));
  fs::remove(path);
  ModelGateway replay(std::make_shared<TranscriptReplayTransport>(loaded), std::make_shared<ManualClock>());
  EXPECT_EQ(replay.chat_complete(e, kHello).text, a.text);
  EXPECT_EQ(replay.embed(e, "some text").vector, v.vector);

  // A changed prompt is a miss, not a silently wrong replay.
  const std::vector<ChatMessage> other = {{"user", "hello there!"}};
  EXPECT_THROW(replay.chat_complete(e, other), FixtureMissing);
}

TEST(Transcript, KeyDependsOnKindAndBody) {
  const json body = {{"model", "m"}, {"messages", json::array()}};
  EXPECT_EQ(Transcript::key_for("chat", body), Transcript::key_for("chat", json::parse(body.dump())));
  EXPECT_NE(Transcript::key_for("chat", body), Transcript::key_for("embeddings", body));
  json changed = body;
  changed["temperature"] = 0.5;
  EXPECT_NE(Transcript::key_for("chat", body), Transcript::key_for("chat", changed));
  EXPECT_EQ(Transcript::kind_of_url("http://h/v1/chat/completions"), "chat");
  EXPECT_EQ(Transcript::kind_of_url("http://h/v1/embeddings"), "embeddings");
}

}  // namespace
}  // namespace nba
