#include "nba/ncbi/eutils.hpp"

#include "nba/common/error.hpp"
#include "nba/common/text.hpp"

namespace nba {

std::string_view to_string(EutilsUtil u) {
  switch (u) {
    case EutilsUtil::esearch:
      return "esearch";
    case EutilsUtil::esummary:
      return "esummary";
    case EutilsUtil::efetch:
      return "efetch";
  }
  return "?";
}

std::optional<EutilsUtil> eutils_util_from_string(std::string_view s) {
  const auto l = text::to_lower(s);
  if (l == "esearch") return EutilsUtil::esearch;
  if (l == "esummary") return EutilsUtil::esummary;
  if (l == "efetch") return EutilsUtil::efetch;
  return std::nullopt;
}

void EutilsRequest::validate() const {
  if (text::trim(db).empty()) throw PreconditionError(std::string(to_string(util)) + ": db is empty");
  auto has = [&](const char* k) {
    auto it = params.find(k);
    return it != params.end() && !text::trim(it->second).empty();
  };
  if (util == EutilsUtil::esearch && !has("term")) throw PreconditionError("esearch requires a term");
  if (util != EutilsUtil::esearch && !has("id"))
    throw PreconditionError(std::string(to_string(util)) + " requires an id");
}

std::map<std::string, std::string> EutilsRequest::effective_params() const {
  auto p = params;
  p["db"] = db;
  if (!p.contains("retmode")) p["retmode"] = util == EutilsUtil::efetch ? "xml" : "json";
  return p;
}

}  // namespace nba
