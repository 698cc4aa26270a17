#pragma once

// Minimal HTTP surface shared by the OpenAlex and chat-completion clients,
// plus the retry and rate-limit helpers they both use.

#include <algorithm>
#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace coauthlp {

using Headers = std::vector<std::pair<std::string, std::string>>;

struct HttpResponse {
  int status = 0;  // 0 when the request never got a response
  std::string body;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse get(const std::string& url, const Headers& headers) = 0;
  virtual HttpResponse post(const std::string& url, const std::string& body, const Headers& headers) = 0;
};

/// cpp-httplib backed transport (http and https).
std::unique_ptr<HttpTransport> make_http_transport(std::chrono::seconds timeout = std::chrono::seconds(60));

/// 429, 5xx and transport failures are worth retrying.
inline bool is_retryable_status(int status) noexcept { return status == 0 || status == 429 || status >= 500; }

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{2000};
  /// Injected so tests can run without real sleeps.
  std::function<void(std::chrono::milliseconds)> sleep;

  std::chrono::milliseconds backoff(int attempt) const {
    return initial_backoff * (1LL << std::min(attempt, 30));
  }
  void wait(std::chrono::milliseconds d) const;
};

/// Spaces acquisitions at least 1/rate apart across all threads.
/// A non-positive rate disables limiting.
class RateLimiter {
 public:
  explicit RateLimiter(double per_second = 0.0);
  void acquire();

 private:
  std::mutex mu_;
  std::chrono::steady_clock::duration interval_{};
  std::chrono::steady_clock::time_point next_{};
  bool enabled_ = false;
};

}  // namespace coauthlp
