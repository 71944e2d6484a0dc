#ifndef BVARCAST_FETCH_HPP
#define BVARCAST_FETCH_HPP

// Optional HTTP client for pulling daily price CSVs from public endpoints.
// Nothing else in the library depends on this header.

#include <httplib.h>

#include <fstream>

#include "bvarcast/config.hpp"
#include "bvarcast/market_data.hpp"

namespace bvarcast {

namespace fetch_detail {

struct SplitUrl {
  std::string host_port;
  std::string path;
  bool https = false;
};

inline SplitUrl split_url(const std::string& url) {
  SplitUrl out;
  std::string rest;
  if (url.rfind("http://", 0) == 0) {
    rest = url.substr(7);
  } else if (url.rfind("https://", 0) == 0) {
    out.https = true;
    rest = url.substr(8);
  } else {
    fail("fetch: url must start with http:// or https://");
  }
  auto slash = rest.find('/');
  out.host_port = slash == std::string::npos ? rest : rest.substr(0, slash);
  out.path = slash == std::string::npos ? "/" : rest.substr(slash);
  return out;
}

} // namespace fetch_detail

// Downloads a `date,price` CSV and stores it under the configured data
// directory after validating the schema.
inline std::string cmd_fetch(const RunConfig& cfg, const std::string& url,
                             const std::string& name) {
  auto parts = fetch_detail::split_url(url);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  require(!parts.https, "fetch: this build supports plain http only");
#endif
  std::string body;
  auto grab = [&](auto& client) {
    client.set_follow_location(true);
    auto res = client.Get(parts.path);
    require(res != nullptr, "fetch: no response from " + parts.host_port);
    require(res->status == 200,
            "fetch: HTTP " + std::to_string(res->status) + " from " + parts.host_port);
    body = res->body;
  };
#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
  if (parts.https) {
    httplib::SSLClient client(parts.host_port);
    grab(client);
  } else
#endif
  {
    httplib::Client client(parts.host_port);
    grab(client);
  }

  std::filesystem::create_directories(cfg.data_dir);
  std::string path = cfg.data_path(name + ".csv");
  {
    std::ofstream out(path);
    require(out.good(), "fetch: cannot write '" + path + "'");
    out << body;
  }
  PriceSeries::read_csv(path, name); // schema check; throws on bad payloads
  return path;
}

} // namespace bvarcast

#endif
