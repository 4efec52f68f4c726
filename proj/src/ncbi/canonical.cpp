#include "nba/ncbi/canonical.hpp"

#include <algorithm>
#include <array>

#include "nba/common/http.hpp"
#include "nba/common/text.hpp"

namespace nba {

namespace {

constexpr std::array<std::string_view, 9> kEnumerated = {"db",          "cmd",         "program", "retmode", "rettype",
                                                         "format_type", "format_object", "megablast", "database"};

}  // namespace

bool is_credential_param(std::string_view name) {
  const auto n = text::to_lower(name);
  return n == "api_key" || n == "tool" || n == "email";
}

std::string canonical_key(std::string_view service, std::string_view endpoint, const Params& params) {
  std::vector<std::pair<std::string, std::string>> norm;
  norm.reserve(params.size());
  for (const auto& [k, v] : params) {
    auto name = text::to_lower(text::trim(k));
    if (name.empty() || is_credential_param(name)) continue;
    auto value = text::trim(v);
    if (std::find(kEnumerated.begin(), kEnumerated.end(), name) != kEnumerated.end()) value = text::to_lower(value);
    norm.emplace_back(std::move(name), std::move(value));
  }
  std::sort(norm.begin(), norm.end());
  std::string key = text::to_lower(text::trim(service));
  key += ':';
  key += text::to_lower(text::trim(endpoint));
  key += '?';
  key += build_query(norm);
  return key;
}

}  // namespace nba
