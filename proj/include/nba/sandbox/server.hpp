#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "nba/common/http.hpp"

namespace nba::sandbox {

using RequestHandler = std::function<HttpResponse(const HttpRequest&)>;

/// A real local HTTP server (cpp-httplib) running `handler` on a background
/// thread. Port 0 binds any free port.
class LocalServer {
 public:
  explicit LocalServer(RequestHandler handler, std::string host = "127.0.0.1", int port = 0);
  ~LocalServer();
  LocalServer(const LocalServer&) = delete;
  LocalServer& operator=(const LocalServer&) = delete;

  int port() const { return port_; }
  std::string base_url() const;
  std::size_t requests() const { return requests_.load(); }
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string host_;
  int port_ = 0;
  std::atomic<std::size_t> requests_{0};
  std::thread thread_;
};

/// Blocks serving `handler` until the process is interrupted.
void serve_forever(RequestHandler handler, const std::string& host, int port);

/// Plays back a fixed list of responses, one per request; the last one
/// repeats once the script runs out. Records every request it saw.
class ScriptedResponder {
 public:
  explicit ScriptedResponder(std::vector<HttpResponse> script);
  HttpResponse operator()(const HttpRequest& request);
  std::vector<HttpRequest> seen() const;
  std::size_t calls() const;

 private:
  std::vector<HttpResponse> script_;
  mutable std::mutex mu_;
  std::vector<HttpRequest> seen_;
};

HttpResponse make_response(int status, std::string body = {},
                           std::map<std::string, std::string> headers = {});

}  // namespace nba::sandbox
