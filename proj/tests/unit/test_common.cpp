#include <gtest/gtest.h>

#include <random>

#include "nba/common/clock.hpp"
#include "nba/common/hash.hpp"
#include "nba/common/http.hpp"
#include "nba/common/text.hpp"

namespace nba {
namespace {

TEST(Text, BasicTransforms) {
  EXPECT_EQ(text::trim("  a b \n"), "a b");
  EXPECT_EQ(text::trim(""), "");
  EXPECT_EQ(text::to_lower("AbC"), "abc");
  EXPECT_EQ(text::to_upper("AbC"), "ABC");
  EXPECT_EQ(text::collapse_whitespace(" a \t\n b  c "), "a b c");
  EXPECT_TRUE(text::iequals("BRCA1", "brca1"));
  EXPECT_FALSE(text::iequals("BRCA1", "brca"));
  EXPECT_TRUE(text::starts_with_ci("What is", "what"));
  EXPECT_TRUE(text::contains_ci("the Official Symbol", "official symbol"));
}

TEST(Text, SplitJoinRoundTrip) {
  EXPECT_EQ(text::split_any("a,,b; c", ",; "), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_TRUE(text::split_any("", ",").empty());
  EXPECT_EQ(text::join({"a", "b", "c"}, ", "), "a, b, c");
  EXPECT_EQ(text::join({}, ", "), "");
}

TEST(Text, Utf8Length) {
  EXPECT_EQ(text::utf8_length("abc"), 3u);
  EXPECT_EQ(text::utf8_length("\xc3\xa9t\xc3\xa9"), 3u);          // été
  EXPECT_EQ(text::utf8_length("\xe2\x86\x92"), 1u);               // →
  EXPECT_EQ(text::utf8_length("\xf0\x9f\xa7\xac"), 1u);           // 4-byte
  EXPECT_EQ(text::utf8_length(std::string("\xff\xfe", 2)), 2u);  // invalid bytes count singly
}

TEST(Text, TemplatesAndWords) {
  EXPECT_EQ(text::render_template("Q: {{question}} / {{missing}}", {{"question", "x"}}), "Q: x / {{missing}}");
  EXPECT_TRUE(text::contains_word_ci("gene is TP53.", "tp53"));
  EXPECT_FALSE(text::contains_word_ci("TP531", "tp53"));
  EXPECT_FALSE(text::contains_word_ci("ATP53", "tp53"));
}

TEST(Hash, KnownDigests) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Url, ParseAbsoluteUrls) {
  auto u = parse_url("https://eutils.ncbi.nlm.nih.gov/entrez/eutils/esearch.fcgi?db=gene");
  EXPECT_EQ(u.scheme, "https");
  EXPECT_EQ(u.host, "eutils.ncbi.nlm.nih.gov");
  EXPECT_EQ(u.port, 443);
  EXPECT_EQ(u.path_and_query, "/entrez/eutils/esearch.fcgi?db=gene");
  auto v = parse_url("http://127.0.0.1:18081");
  EXPECT_EQ(v.port, 18081);
  EXPECT_EQ(v.path_and_query, "/");
  EXPECT_THROW(parse_url("ftp://x"), PreconditionError);
  EXPECT_THROW(parse_url("not a url"), PreconditionError);
}

TEST(Url, PercentEncodingRoundTrips) {
  EXPECT_EQ(percent_encode("a b[sym]&x=1"), "a%20b%5Bsym%5D%26x%3D1");
  EXPECT_EQ(percent_encode("AZaz09-._~"), "AZaz09-._~");
  std::mt19937 rng(5);
  for (int i = 0; i < 500; ++i) {
    std::string s(rng() % 40, '\0');
    for (auto& c : s) c = static_cast<char>(rng() % 256);
    ASSERT_EQ(percent_decode(percent_encode(s)), s);
  }
}

TEST(Url, QueryRoundTripKeepsOrder) {
  std::vector<std::pair<std::string, std::string>> p = {{"term", "LMP10[sym] AND human[orgn]"}, {"db", "gene"}, {"e", ""}};
  EXPECT_EQ(parse_query(build_query(p)), p);
  EXPECT_TRUE(parse_query("").empty());
}

TEST(Clock, ManualClockOnlyMovesWhenTold) {
  ManualClock c(1000);
  EXPECT_EQ(c.monotonic_ms(), 1000);
  c.sleep_for(Millis(250));
  EXPECT_EQ(c.monotonic_ms(), 1250);
  c.advance(Millis(50));
  EXPECT_EQ(c.wall_ms(), 1300);
  EXPECT_EQ(c.total_slept_ms(), 250);

  ManualClock stepping(0, 2);
  EXPECT_EQ(stepping.monotonic_ms(), 2);
  EXPECT_EQ(stepping.monotonic_ms(), 4);
}

TEST(Clock, SystemClockIsMonotone) {
  SystemClock c;
  const auto a = c.monotonic_ms();
  c.sleep_for(Millis(5));
  EXPECT_GE(c.monotonic_ms() - a, 5);
  EXPECT_GT(c.wall_ms(), 1'600'000'000'000);
}

TEST(Transport, OfflineRefusesAndCounts) {
  OfflineTransport t;
  HttpRequest r;
  r.url = "https://example.org/";
  EXPECT_THROW(t.send(r), NetworkDisabled);
  EXPECT_EQ(t.refused(), 1u);
}

}  // namespace
}  // namespace nba
