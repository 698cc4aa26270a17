#pragma once

// Prompt construction for pair-level collaboration prediction, response
// parsing, an OpenAI-compatible chat client, a deterministic offline mock and
// a cached, rate-limited batch predictor.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coauthlp/error.hpp"
#include "coauthlp/graph.hpp"
#include "coauthlp/http.hpp"
#include "coauthlp/profiles.hpp"

namespace coauthlp {

enum class PromptVariant : std::uint8_t {
  Base,
  PlusCountry,
  PlusEthnicity,
  PlusBoth,
  PlusNetworkStats,
  NoConcepts,
  EraRestricted,
};

const char* to_string(PromptVariant v) noexcept;
std::optional<PromptVariant> parse_prompt_variant(std::string_view name) noexcept;
std::vector<PromptVariant> all_prompt_variants();

/// Activity restricted to the training era, for EraRestricted prompts.
struct EraScopedCounts {
  std::uint64_t works_count = 0;
  std::uint64_t cited_by_count = 0;
  std::string institution;
};

struct PromptExtras {
  std::optional<double> adamic_adar;       // PlusNetworkStats
  std::optional<double> common_neighbors;  // PlusNetworkStats
  std::optional<EraScopedCounts> era_a;    // EraRestricted
  std::optional<EraScopedCounts> era_b;    // EraRestricted
  std::string eval_window;                 // e.g. "2008-2009"; optional
};

/// Deterministic prompt text. Throws InvalidArgument when the variant needs
/// extras that are absent.
std::string build_prompt(const AuthorProfile& a, const AuthorProfile& b, PromptVariant variant,
                         const PromptExtras& extras = {});

/// Appended on the single reprompt after an unparseable answer.
inline constexpr std::string_view kReprompt = "\n\nAnswer only in JSON.";

class UnparseableResponse : public ParseError {
 public:
  explicit UnparseableResponse(const std::string& raw) : ParseError("unparseable LLM response"), raw_(raw) {}
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

struct ParsedVerdict {
  bool collaborate = false;
  double probability = 0.0;

  bool operator==(const ParsedVerdict&) const = default;
};

/// (1) first JSON object carrying collaborate and/or probability; (2) a
/// standalone yes/no token -> 1.0/0.0; (3) a bare number in [0,1]. The
/// verdict is always probability >= 0.5. Throws UnparseableResponse otherwise.
ParsedVerdict parse_response(std::string_view raw);

struct ChatResult {
  int status = 0;  // HTTP status; 200 on success, 0 on transport failure
  std::string content;
  std::string error;
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual ChatResult complete(const std::string& model, const std::string& prompt) = 0;
};

struct ChatEndpoint {
  std::string base_url;  // POST {base_url}/chat/completions
  std::string api_key;   // bearer token; read from LLM_API_KEY by from_env()
  static ChatEndpoint from_env(std::string base_url);
};

/// OpenAI-compatible chat completions at temperature 0.
class OpenAiChatBackend : public ChatBackend {
 public:
  OpenAiChatBackend(ChatEndpoint endpoint, std::shared_ptr<HttpTransport> transport);
  ChatResult complete(const std::string& model, const std::string& prompt) override;

  /// Request body sent for a prompt (exposed for wire-format tests).
  static std::string request_body(const std::string& model, const std::string& prompt);

 private:
  ChatEndpoint endpoint_;
  std::shared_ptr<HttpTransport> transport_;
};

/// Offline stand-in. By default answers with a JSON verdict whose probability
/// rises with the concept overlap and network statistics visible in the
/// prompt, jittered by a seeded hash of the prompt. A custom responder can
/// script arbitrary replies and failures.
class MockChatBackend : public ChatBackend {
 public:
  using Responder = std::function<ChatResult(const std::string& prompt, std::size_t call_index)>;

  explicit MockChatBackend(std::uint64_t seed = 0, Responder responder = {});
  ChatResult complete(const std::string& model, const std::string& prompt) override;

  std::size_t calls() const noexcept { return calls_.load(); }
  /// The default probability for a prompt.
  double probability_for(const std::string& prompt) const;

 private:
  std::uint64_t seed_;
  Responder responder_;
  std::atomic<std::size_t> calls_{0};
};

/// Content-addressed response cache: one JSON file per
/// sha256(model, variant, prompt). Concurrent readers, serialised writers.
class LlmCache {
 public:
  explicit LlmCache(std::filesystem::path dir);
  static std::string key(std::string_view model, PromptVariant variant, std::string_view prompt);
  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, std::string_view model, PromptVariant variant, std::string_view response);
  bool enabled() const noexcept { return !dir_.empty(); }

 private:
  std::filesystem::path dir_;
  mutable std::shared_mutex mu_;
};

struct LlmConfig {
  std::string model = "Qwen2.5-72B-Instruct";
  std::filesystem::path cache_dir;  // empty disables caching
  double requests_per_minute = 22.5;  // <= 0 disables limiting
  unsigned concurrency = 4;
  RetryPolicy retry{3, std::chrono::milliseconds(2000), {}};
};

struct LlmRequest {
  NodeId u = 0;
  NodeId v = 0;
  std::string prompt;  // empty when `error` is set
  std::string error;   // e.g. "missing-profile"; passed through as an error record
};

struct LlmPrediction {
  NodeId u = 0;
  NodeId v = 0;
  bool collaborate = false;
  double probability = 0.0;
  std::string raw_response;
  PromptVariant variant = PromptVariant::Base;
  std::string model;
  bool cached = false;
};

struct LlmResult {
  NodeId u = 0;
  NodeId v = 0;
  std::optional<LlmPrediction> prediction;
  std::string error;         // set when prediction is absent
  std::string raw_response;  // last raw text seen, also on failure
};

/// One result per request, in input order. Failures become error records and
/// never abort the batch.
std::vector<LlmResult> predict(std::span<const LlmRequest> requests, PromptVariant variant, ChatBackend& backend,
                               const LlmConfig& config);

}  // namespace coauthlp
