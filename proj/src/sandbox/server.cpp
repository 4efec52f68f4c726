#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "nba/sandbox/server.hpp"

#include <httplib.h>

#include "nba/common/error.hpp"

namespace nba::sandbox {

namespace {

void install(httplib::Server& svr, RequestHandler handler, std::string origin, std::atomic<std::size_t>* counter) {
  auto route = [handler = std::move(handler), origin = std::move(origin), counter](const httplib::Request& req,
                                                                                  httplib::Response& res) {
    if (counter) counter->fetch_add(1);
    HttpRequest r;
    r.method = req.method;
    r.url = origin + req.target;
    r.body = req.body;
    r.content_type = req.get_header_value("Content-Type");
    for (const auto& [k, v] : req.headers) r.headers[k] = v;
    HttpResponse out;
    try {
      out = handler(r);
    } catch (const std::exception& e) {
      out = make_response(500, e.what());
    }
    res.status = out.status;
    std::string type = "text/plain";
    for (const auto& [k, v] : out.headers) {
      if (k == "Content-Type")
        type = v;
      else
        res.set_header(k, v);
    }
    res.set_content(out.body, type);
  };
  svr.Get(".*", route);
  svr.Post(".*", route);
}

}  // namespace

struct LocalServer::Impl {
  httplib::Server server;
};

LocalServer::LocalServer(RequestHandler handler, std::string host, int port)
    : impl_(std::make_unique<Impl>()), host_(std::move(host)) {
  port_ = port == 0 ? impl_->server.bind_to_any_port(host_) : (impl_->server.bind_to_port(host_, port) ? port : -1);
  if (port_ <= 0) throw ConfigError("cannot bind " + host_ + ":" + std::to_string(port));
  install(impl_->server, std::move(handler), base_url(), &requests_);
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

LocalServer::~LocalServer() { stop(); }

void LocalServer::stop() {
  if (!thread_.joinable()) return;
  impl_->server.stop();
  thread_.join();
}

std::string LocalServer::base_url() const { return "http://" + host_ + ":" + std::to_string(port_); }

void serve_forever(RequestHandler handler, const std::string& host, int port) {
  httplib::Server server;
  install(server, std::move(handler), "http://" + host + ":" + std::to_string(port), nullptr);
  if (!server.listen(host, port)) throw ConfigError("cannot listen on " + host + ":" + std::to_string(port));
}

ScriptedResponder::ScriptedResponder(std::vector<HttpResponse> script) : script_(std::move(script)) {
  if (script_.empty()) throw PreconditionError("scripted responder needs at least one response");
}

HttpResponse ScriptedResponder::operator()(const HttpRequest& request) {
  std::lock_guard lock(mu_);
  seen_.push_back(request);
  return script_[std::min(seen_.size(), script_.size()) - 1];
}

std::vector<HttpRequest> ScriptedResponder::seen() const {
  std::lock_guard lock(mu_);
  return seen_;
}

std::size_t ScriptedResponder::calls() const {
  std::lock_guard lock(mu_);
  return seen_.size();
}

HttpResponse make_response(int status, std::string body, std::map<std::string, std::string> headers) {
  HttpResponse r;
  r.status = status;
  r.body = std::move(body);
  r.headers = std::move(headers);
  return r;
}

}  // namespace nba::sandbox
