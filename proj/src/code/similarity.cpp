#include "nba/code/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nba {

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw DimensionMismatch("vector dimensions differ: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  if (a.empty()) throw ZeroVector("empty vectors have no direction");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) throw ZeroVector("cosine similarity of a zero vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

}  // namespace nba
