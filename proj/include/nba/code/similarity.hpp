#pragma once

#include <span>

#include "nba/common/error.hpp"

namespace nba {

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};
class ZeroVector : public Error {
 public:
  using Error::Error;
};

/// dot(a, b) / (|a| |b|), clamped to [-1, 1] against rounding.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

}  // namespace nba
