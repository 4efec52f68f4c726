#pragma once

#include <cstdint>
#include <string_view>

#include <nlohmann/json.hpp>

namespace nba {

/// Character-based consumption of a call. Token counts are estimates
/// derived from characters, never provider-reported.
struct UsageMetrics {
  std::uint64_t chars_in = 0;
  std::uint64_t chars_out = 0;
  std::uint64_t est_tokens_in = 0;
  std::uint64_t est_tokens_out = 0;
  std::int64_t elapsed_ms = 0;
  std::uint32_t attempts = 0;

  UsageMetrics& operator+=(const UsageMetrics& o) {
    chars_in += o.chars_in;
    chars_out += o.chars_out;
    est_tokens_in += o.est_tokens_in;
    est_tokens_out += o.est_tokens_out;
    elapsed_ms += o.elapsed_ms;
    attempts += o.attempts;
    return *this;
  }
  bool operator==(const UsageMetrics&) const = default;
};

inline UsageMetrics operator+(UsageMetrics a, const UsageMetrics& b) { return a += b; }

inline constexpr double kDefaultCharsPerToken = 4.0;

/// ceil(chars / ratio). Throws PreconditionError unless ratio > 0.
std::uint64_t estimate_tokens(std::uint64_t chars, double chars_per_token);

/// Usage for a call that moved `in` and `out` characters.
UsageMetrics make_usage(std::uint64_t chars_in, std::uint64_t chars_out, double chars_per_token,
                        std::int64_t elapsed_ms, std::uint32_t attempts);

/// Ratio that maps the corpus' characters onto the reference tokenizer's
/// token total: sum(chars) / sum(tokens).
double fit_chars_per_token(std::uint64_t total_chars, std::uint64_t total_reference_tokens);

nlohmann::json to_json(const UsageMetrics& u);
UsageMetrics usage_from_json(const nlohmann::json& j);

}  // namespace nba
