#include "nba/gateway/usage.hpp"

#include <cmath>

#include "nba/common/error.hpp"

namespace nba {

std::uint64_t estimate_tokens(std::uint64_t chars, double chars_per_token) {
  if (!(chars_per_token > 0.0) || !std::isfinite(chars_per_token))
    throw PreconditionError("chars-per-token ratio must be positive");
  return static_cast<std::uint64_t>(std::ceil(static_cast<double>(chars) / chars_per_token));
}

UsageMetrics make_usage(std::uint64_t chars_in, std::uint64_t chars_out, double chars_per_token,
                        std::int64_t elapsed_ms, std::uint32_t attempts) {
  UsageMetrics u;
  u.chars_in = chars_in;
  u.chars_out = chars_out;
  u.est_tokens_in = estimate_tokens(chars_in, chars_per_token);
  u.est_tokens_out = estimate_tokens(chars_out, chars_per_token);
  u.elapsed_ms = elapsed_ms;
  u.attempts = attempts;
  return u;
}

double fit_chars_per_token(std::uint64_t total_chars, std::uint64_t total_reference_tokens) {
  if (total_reference_tokens == 0) throw PreconditionError("calibration corpus has no reference tokens");
  return static_cast<double>(total_chars) / static_cast<double>(total_reference_tokens);
}

nlohmann::json to_json(const UsageMetrics& u) {
  return {{"chars_in", u.chars_in},           {"chars_out", u.chars_out},   {"est_tokens_in", u.est_tokens_in},
          {"est_tokens_out", u.est_tokens_out}, {"elapsed_ms", u.elapsed_ms}, {"attempts", u.attempts}};
}

UsageMetrics usage_from_json(const nlohmann::json& j) {
  UsageMetrics u;
  u.chars_in = j.value("chars_in", std::uint64_t{0});
  u.chars_out = j.value("chars_out", std::uint64_t{0});
  u.est_tokens_in = j.value("est_tokens_in", std::uint64_t{0});
  u.est_tokens_out = j.value("est_tokens_out", std::uint64_t{0});
  u.elapsed_ms = j.value("elapsed_ms", std::int64_t{0});
  u.attempts = j.value("attempts", std::uint32_t{0});
  return u;
}

}  // namespace nba
