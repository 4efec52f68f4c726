#pragma once

#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nba/common/error.hpp"

namespace nba {

struct HttpRequest {
  std::string method = "GET";
  std::string url;  // absolute, query string included
  std::map<std::string, std::string> headers;
  std::string body;
  std::string content_type;
  std::chrono::milliseconds timeout{30'000};
};

struct HttpResponse {
  int status = 0;
  std::string body;
  std::map<std::string, std::string> headers;
};

/// Connection-level failure (DNS, refused, reset, timeout).
class TransportError : public Error {
 public:
  explicit TransportError(const std::string& what, bool timed_out = false)
      : Error(what), timed_out_(timed_out) {}
  bool timed_out() const { return timed_out_; }

 private:
  bool timed_out_;
};

/// The single seam between the library and the network.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse send(const HttpRequest& request) = 0;
};

/// Real network access through cpp-httplib (HTTPS via OpenSSL).
class HttplibTransport final : public HttpTransport {
 public:
  HttpResponse send(const HttpRequest& request) override;
};

/// Refuses every request. Mounted whenever --offline is set, so an offline
/// run cannot open a socket even by accident.
class OfflineTransport final : public HttpTransport {
 public:
  HttpResponse send(const HttpRequest& request) override;
  std::size_t refused() const { return refused_.load(); }

 private:
  std::atomic<std::size_t> refused_{0};
};

/// Decorator that counts dispatched requests.
class CountingTransport final : public HttpTransport {
 public:
  explicit CountingTransport(std::shared_ptr<HttpTransport> inner) : inner_(std::move(inner)) {}
  HttpResponse send(const HttpRequest& request) override {
    count_.fetch_add(1);
    return inner_->send(request);
  }
  std::size_t count() const { return count_.load(); }

 private:
  std::shared_ptr<HttpTransport> inner_;
  std::atomic<std::size_t> count_{0};
};

struct ParsedUrl {
  std::string scheme;  // http | https
  std::string host;
  int port = 0;
  std::string path_and_query;  // starts with '/'
};

ParsedUrl parse_url(std::string_view url);

/// RFC 3986 percent-encoding of everything but unreserved characters.
std::string percent_encode(std::string_view s);
std::string percent_decode(std::string_view s);

/// "k1=v1&k2=v2" with both sides encoded, in the given order.
std::string build_query(const std::vector<std::pair<std::string, std::string>>& params);
std::vector<std::pair<std::string, std::string>> parse_query(std::string_view query);

}  // namespace nba
