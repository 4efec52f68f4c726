#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "nba/common/http.hpp"
#include "nba/sandbox/world.hpp"

namespace nba::sandbox {

/// E-utils (esearch, esummary, efetch) and the BLAST URL API over a
/// synthetic World. A BLAST search reports WAITING for `waiting_polls`
/// SearchInfo requests before it turns READY. RIDs derive from the query,
/// so reruns see the same identifiers.
class MockNcbi {
 public:
  explicit MockNcbi(std::shared_ptr<const World> world, int waiting_polls = 1);

  /// `path` is the URL path; `params` the decoded query string, or the
  /// form body for POST.
  HttpResponse handle(const std::string& method, const std::string& path,
                      const std::vector<std::pair<std::string, std::string>>& params);
  HttpResponse handle(const HttpRequest& request);

  std::size_t requests() const;

 private:
  HttpResponse esearch(const std::map<std::string, std::string>& q) const;
  HttpResponse esummary(const std::map<std::string, std::string>& q) const;
  HttpResponse efetch(const std::map<std::string, std::string>& q) const;
  HttpResponse blast(const std::map<std::string, std::string>& q);

  struct Search {
    std::string sequence;
    std::string database;
    int polls = 0;
  };

  std::shared_ptr<const World> world_;
  int waiting_polls_;
  mutable std::mutex mu_;
  std::map<std::string, Search> searches_;
  std::size_t requests_ = 0;
};

/// In-process transport: routes by URL path and ignores the host, so the
/// real NCBI base URLs can stay configured.
class MockNcbiTransport final : public HttpTransport {
 public:
  explicit MockNcbiTransport(std::shared_ptr<MockNcbi> ncbi) : ncbi_(std::move(ncbi)) {}
  HttpResponse send(const HttpRequest& request) override { return ncbi_->handle(request); }

 private:
  std::shared_ptr<MockNcbi> ncbi_;
};

}  // namespace nba::sandbox
