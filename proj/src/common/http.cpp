#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "nba/common/http.hpp"

#include <httplib.h>

#include <cctype>
#include <charconv>

namespace nba {

ParsedUrl parse_url(std::string_view url) {
  ParsedUrl out;
  auto sep = url.find("://");
  if (sep == std::string_view::npos) throw PreconditionError("url without scheme: " + std::string(url));
  out.scheme = std::string(url.substr(0, sep));
  if (out.scheme != "http" && out.scheme != "https")
    throw PreconditionError("unsupported url scheme: " + out.scheme);
  auto rest = url.substr(sep + 3);
  auto slash = rest.find('/');
  auto authority = rest.substr(0, slash);
  out.path_and_query = slash == std::string_view::npos ? "/" : std::string(rest.substr(slash));
  auto colon = authority.rfind(':');
  if (colon != std::string_view::npos) {
    out.host = std::string(authority.substr(0, colon));
    auto port_str = authority.substr(colon + 1);
    auto [p, ec] = std::from_chars(port_str.data(), port_str.data() + port_str.size(), out.port);
    if (ec != std::errc() || p != port_str.data() + port_str.size())
      throw PreconditionError("bad port in url: " + std::string(url));
  } else {
    out.host = std::string(authority);
    out.port = out.scheme == "https" ? 443 : 80;
  }
  if (out.host.empty()) throw PreconditionError("url without host: " + std::string(url));
  return out;
}

std::string percent_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0x0F]);
    }
  }
  return out;
}

std::string percent_decode(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      int v = 0;
      auto [p, ec] = std::from_chars(s.data() + i + 1, s.data() + i + 3, v, 16);
      if (ec == std::errc() && p == s.data() + i + 3) {
        out.push_back(static_cast<char>(v));
        i += 2;
        continue;
      }
    }
    out.push_back(s[i] == '+' ? ' ' : s[i]);
  }
  return out;
}

std::string build_query(const std::vector<std::pair<std::string, std::string>>& params) {
  std::string out;
  for (const auto& [k, v] : params) {
    if (!out.empty()) out.push_back('&');
    out += percent_encode(k);
    out.push_back('=');
    out += percent_encode(v);
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_query(std::string_view query) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t pos = 0;
  while (pos <= query.size()) {
    auto amp = query.find('&', pos);
    auto piece = query.substr(pos, amp == std::string_view::npos ? std::string_view::npos : amp - pos);
    if (!piece.empty()) {
      auto eq = piece.find('=');
      if (eq == std::string_view::npos)
        out.emplace_back(percent_decode(piece), "");
      else
        out.emplace_back(percent_decode(piece.substr(0, eq)), percent_decode(piece.substr(eq + 1)));
    }
    if (amp == std::string_view::npos) break;
    pos = amp + 1;
  }
  return out;
}

HttpResponse HttplibTransport::send(const HttpRequest& request) {
  const ParsedUrl url = parse_url(request.url);
  const std::string origin = url.scheme + "://" + url.host + ":" + std::to_string(url.port);
  httplib::Client client(origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
  client.set_connection_timeout(std::max<long>(1, static_cast<long>(secs.count())), 0);
  client.set_read_timeout(std::max<long>(1, static_cast<long>(secs.count())), 0);
  client.set_follow_location(true);

  httplib::Headers headers(request.headers.begin(), request.headers.end());
  httplib::Result result = request.method == "POST"
                               ? client.Post(url.path_and_query, headers, request.body,
                                             request.content_type.empty() ? "application/json"
                                                                          : request.content_type)
                               : client.Get(url.path_and_query, headers);
  if (!result) {
    const auto err = result.error();
    const bool timed_out = err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read;
    throw TransportError("http " + request.method + " " + origin + ": " + httplib::to_string(err), timed_out);
  }
  HttpResponse out;
  out.status = result->status;
  out.body = result->body;
  for (const auto& [k, v] : result->headers) out.headers[k] = v;
  return out;
}

HttpResponse OfflineTransport::send(const HttpRequest& request) {
  refused_.fetch_add(1);
  throw NetworkDisabled("offline mode: refused " + request.method + " " + request.url);
}

}  // namespace nba
