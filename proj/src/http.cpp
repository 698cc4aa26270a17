#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "coauthlp/http.hpp"

#include <thread>

namespace coauthlp {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // /path?query
};

SplitUrl split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  auto path_start = url.find('/', host_start);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

class HttplibTransport final : public HttpTransport {
 public:
  explicit HttplibTransport(std::chrono::seconds timeout) : timeout_(timeout) {}

  HttpResponse get(const std::string& url, const Headers& headers) override {
    auto parts = split_url(url);
    auto client = make_client(parts.origin);
    auto res = client.Get(parts.path, to_httplib(headers));
    return convert(res);
  }

  HttpResponse post(const std::string& url, const std::string& body, const Headers& headers) override {
    auto parts = split_url(url);
    auto client = make_client(parts.origin);
    auto res = client.Post(parts.path, to_httplib(headers), body, "application/json");
    return convert(res);
  }

 private:
  httplib::Client make_client(const std::string& origin) const {
    httplib::Client client(origin);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_follow_location(true);
    return client;
  }

  static httplib::Headers to_httplib(const Headers& headers) {
    httplib::Headers out;
    for (const auto& [k, v] : headers) out.emplace(k, v);
    return out;
  }

  static HttpResponse convert(const httplib::Result& res) {
    if (!res) return {0, "transport error: " + httplib::to_string(res.error())};
    return {res->status, res->body};
  }

  std::chrono::seconds timeout_;
};

}  // namespace

std::unique_ptr<HttpTransport> make_http_transport(std::chrono::seconds timeout) {
  return std::make_unique<HttplibTransport>(timeout);
}

void RetryPolicy::wait(std::chrono::milliseconds d) const {
  if (sleep) sleep(d);
  else std::this_thread::sleep_for(d);
}

RateLimiter::RateLimiter(double per_second) : enabled_(per_second > 0.0) {
  if (enabled_)
    interval_ = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / per_second));
}

void RateLimiter::acquire() {
  if (!enabled_) return;
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mu_);
    auto now = std::chrono::steady_clock::now();
    slot = std::max(now, next_);
    next_ = slot + interval_;
  }
  std::this_thread::sleep_until(slot);
}

}  // namespace coauthlp
