#pragma once

#include <string>

#include "nba/common/error.hpp"

namespace nba {

/// NCBI answered with a non-success status.
class HttpError : public Error {
 public:
  HttpError(int status, const std::string& what) : Error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};
class Timeout : public Error {
 public:
  using Error::Error;
};
/// Well-formed response without any record (esearch count 0, empty esummary).
class EmptyResult : public Error {
 public:
  using Error::Error;
};
class RidParseError : public Error {
 public:
  using Error::Error;
};
class PollBudgetExhausted : public Error {
 public:
  using Error::Error;
};
class NoHits : public Error {
 public:
  using Error::Error;
};
/// A response body that should be JSON/XML/BLAST text but cannot be read.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace nba
