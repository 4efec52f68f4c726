#pragma once

#include "nba/common/error.hpp"

namespace nba {

/// Parameter inference left a required parameter empty.
class MissingParameter : public Error {
 public:
  using Error::Error;
};
/// A document held nothing for the extraction goal (or was about another entity).
class ExtractionEmpty : public Error {
 public:
  using Error::Error;
};
class AggregationFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace nba
