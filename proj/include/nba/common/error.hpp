#pragma once

#include <stdexcept>
#include <string>

namespace nba {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A configuration file or flag set cannot be turned into a runnable setup.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A JSON document does not follow the documented schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Network access was requested while running offline.
class NetworkDisabled : public Error {
 public:
  using Error::Error;
};

/// Offline replay found no recorded response for a request.
class FixtureMissing : public Error {
 public:
  using Error::Error;
};

}  // namespace nba
