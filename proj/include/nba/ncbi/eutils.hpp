#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace nba {

enum class EutilsUtil { esearch, esummary, efetch };

std::string_view to_string(EutilsUtil u);
std::optional<EutilsUtil> eutils_util_from_string(std::string_view s);

struct EutilsRequest {
  EutilsUtil util = EutilsUtil::esearch;
  std::string db;
  std::map<std::string, std::string> params;  // term, id, retmode, retmax, ...

  /// db non-empty; esearch needs term, esummary/efetch need id.
  /// Throws PreconditionError.
  void validate() const;
  /// retmode=json is added for esearch/esummary unless given; efetch
  /// defaults to xml (gene records have no JSON form).
  std::map<std::string, std::string> effective_params() const;
};

}  // namespace nba
