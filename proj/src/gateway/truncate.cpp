#include "nba/gateway/truncate.hpp"

#include <algorithm>

#include "nba/common/error.hpp"

namespace nba {

std::string truncate_document(std::string_view doc, std::size_t budget, std::string_view marker) {
  if (budget <= marker.size())
    throw PreconditionError("truncation budget " + std::to_string(budget) + " must exceed marker length " +
                            std::to_string(marker.size()));
  if (doc.size() <= budget) return std::string(doc);

  const std::size_t tail = std::min(budget * 2 / 5, budget - marker.size());
  const std::size_t head = budget - tail - marker.size();
  std::string out;
  out.reserve(budget);
  out.append(doc.substr(0, head));
  out.append(marker);
  out.append(doc.substr(doc.size() - tail));
  return out;
}

}  // namespace nba
