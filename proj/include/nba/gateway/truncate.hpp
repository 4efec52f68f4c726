#pragma once

#include <string>
#include <string_view>

namespace nba {

inline constexpr std::string_view kElisionMarker = "\n[... truncated ...]\n";

/// Fits `doc` into `budget` characters (bytes). Documents that already fit
/// come back unchanged; longer ones keep a head and a tail joined by
/// `marker`. The tail gets 40% of the budget, the head whatever remains
/// after the marker.
///
/// Throws PreconditionError unless budget > marker.size().
std::string truncate_document(std::string_view doc, std::size_t budget,
                              std::string_view marker = kElisionMarker);

}  // namespace nba
