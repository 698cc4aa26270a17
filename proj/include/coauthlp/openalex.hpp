#pragma once

// Per-author OpenAlex REST client with an on-disk cache (one JSON file per
// author id), retries on 429/5xx and a global request-rate limit.

#include <atomic>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coauthlp/error.hpp"
#include "coauthlp/http.hpp"
#include "coauthlp/profiles.hpp"

namespace coauthlp {

class AuthorUnknown : public Error {
 public:
  explicit AuthorUnknown(const std::string& id) : Error("author unknown: " + id) {}
};

struct OpenAlexConfig {
  std::string base_url = "https://api.openalex.org";
  std::string mailto;
  std::filesystem::path cache_dir;
  double requests_per_second = 10.0;
  RetryPolicy retry{5, std::chrono::milliseconds(1000), {}};
};

/// "https://openalex.org/A123" -> "A123".
std::string openalex_short_id(std::string_view id);

/// Parses an /authors/{id} response body. Concepts are ordered by score,
/// highest first. Throws ParseError on malformed bodies.
AuthorProfile parse_openalex_author(std::string_view body, std::string_view id);

struct FetchOutcome {
  std::string id;
  std::optional<AuthorProfile> profile;
  std::string error;
};

class OpenAlexClient {
 public:
  OpenAlexClient(OpenAlexConfig config, std::shared_ptr<HttpTransport> transport);

  /// Cache first, then the API. Throws AuthorUnknown on 404 and Error once
  /// retries are exhausted.
  AuthorProfile fetch(std::string_view id);

  /// Bounded parallel fetch; outcomes are in input order.
  std::vector<FetchOutcome> fetch_many(const std::vector<std::string>& ids, unsigned workers = 4);

  std::size_t network_calls() const noexcept { return network_calls_.load(); }

 private:
  std::filesystem::path cache_path(const std::string& short_id) const;

  OpenAlexConfig config_;
  std::shared_ptr<HttpTransport> transport_;
  RateLimiter limiter_;
  std::atomic<std::size_t> network_calls_{0};
};

}  // namespace coauthlp
