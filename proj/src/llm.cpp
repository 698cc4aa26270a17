#include "coauthlp/llm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "coauthlp/hash.hpp"
#include "coauthlp/io.hpp"
#include "coauthlp/parallel.hpp"
#include "coauthlp/rng.hpp"
#include "coauthlp/text.hpp"

namespace coauthlp {

const char* to_string(PromptVariant v) noexcept {
  switch (v) {
    case PromptVariant::Base: return "base";
    case PromptVariant::PlusCountry: return "plus_country";
    case PromptVariant::PlusEthnicity: return "plus_ethnicity";
    case PromptVariant::PlusBoth: return "plus_both";
    case PromptVariant::PlusNetworkStats: return "plus_network_stats";
    case PromptVariant::NoConcepts: return "no_concepts";
    case PromptVariant::EraRestricted: return "era_restricted";
  }
  return "?";
}

std::vector<PromptVariant> all_prompt_variants() {
  return {PromptVariant::Base,          PromptVariant::PlusCountry,      PromptVariant::PlusEthnicity,
          PromptVariant::PlusBoth,      PromptVariant::PlusNetworkStats, PromptVariant::NoConcepts,
          PromptVariant::EraRestricted};
}

std::optional<PromptVariant> parse_prompt_variant(std::string_view name) noexcept {
  for (auto v : all_prompt_variants())
    if (name == to_string(v)) return v;
  return std::nullopt;
}

namespace {

constexpr std::string_view kConceptsPrefix = "Concepts: ";
constexpr std::string_view kNetworkPrefix = "Network statistics: ";

std::string or_unknown(std::string_view s) { return s.empty() ? std::string("unknown") : std::string(s); }

void profile_block(std::ostringstream& out, std::string_view label, const AuthorProfile& p, PromptVariant variant,
                   const std::optional<EraScopedCounts>& era) {
  const bool era_scoped = variant == PromptVariant::EraRestricted;
  out << "Researcher " << label << '\n';
  out << "Name: " << or_unknown(p.display_name) << '\n';
  if (era_scoped) {
    out << "Institution (training era): " << or_unknown(era->institution) << '\n';
    out << "Works count (training era): " << era->works_count << '\n';
    out << "Cited-by count (training era): " << era->cited_by_count << '\n';
  } else {
    out << "Institution: " << or_unknown(p.institution) << '\n';
    out << "Works count: " << p.works_count << '\n';
    out << "Cited-by count: " << p.cited_by_count << '\n';
  }
  if (variant != PromptVariant::NoConcepts) {
    out << kConceptsPrefix;
    for (std::size_t i = 0; i < p.concepts.size(); ++i) out << (i ? "; " : "") << p.concepts[i];
    if (p.concepts.empty()) out << "none listed";
    out << '\n';
  }
  if (variant == PromptVariant::PlusCountry || variant == PromptVariant::PlusBoth)
    out << "Country: " << or_unknown(p.country_code) << '\n';
  if (variant == PromptVariant::PlusEthnicity || variant == PromptVariant::PlusBoth)
    out << "Ethnicity: " << or_unknown(p.ethnicity.value_or("")) << '\n';
}

}  // namespace

std::string build_prompt(const AuthorProfile& a, const AuthorProfile& b, PromptVariant variant,
                         const PromptExtras& extras) {
  if (variant == PromptVariant::PlusNetworkStats && (!extras.adamic_adar || !extras.common_neighbors))
    throw InvalidArgument("plus_network_stats prompt needs Adamic-Adar and common-neighbour values");
  if (variant == PromptVariant::EraRestricted && (!extras.era_a || !extras.era_b))
    throw InvalidArgument("era_restricted prompt needs era-scoped counts for both authors");

  std::ostringstream out;
  out << "You are given the profiles of two researchers. Predict whether these two researchers will co-author "
         "within the evaluation window";
  if (!extras.eval_window.empty()) out << " (" << extras.eval_window << ")";
  out << ".\n\n";
  profile_block(out, "A", a, variant, extras.era_a);
  out << '\n';
  profile_block(out, "B", b, variant, extras.era_b);
  out << '\n';
  if (variant == PromptVariant::PlusNetworkStats) {
    out << kNetworkPrefix << "Adamic-Adar = " << format_number(*extras.adamic_adar)
        << ", common neighbors = " << format_number(*extras.common_neighbors) << '\n';
    out << '\n';
  }
  out << "Respond with a JSON object of the form {\"collaborate\": \"yes\" or \"no\", \"probability\": <number between "
         "0 and 1>}.\n";
  return out.str();
}

namespace {

// Balanced-brace scan that respects JSON strings; returns each candidate object text.
std::vector<std::string_view> json_object_spans(std::string_view s) {
  std::vector<std::string_view> out;
  for (std::size_t start = s.find('{'); start != std::string_view::npos; start = s.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = start; i < s.size(); ++i) {
      char c = s[i];
      if (in_string) {
        if (c == '\\') {
          ++i;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}' && --depth == 0) {
        out.push_back(s.substr(start, i - start + 1));
        break;
      }
    }
  }
  return out;
}

std::optional<double> probability_field(const nlohmann::json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_double(trim(v.get<std::string>()));
  return std::nullopt;
}

std::optional<bool> verdict_field(const nlohmann::json& v) {
  if (v.is_boolean()) return v.get<bool>();
  if (!v.is_string()) return std::nullopt;
  auto s = to_lower(trim(v.get<std::string>()));
  if (s == "yes" || s == "true") return true;
  if (s == "no" || s == "false") return false;
  return std::nullopt;
}

std::optional<ParsedVerdict> from_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) return std::nullopt;
  return ParsedVerdict{p >= 0.5, p};
}

std::optional<ParsedVerdict> try_json(std::string_view raw) {
  for (auto span : json_object_spans(raw)) {
    auto j = nlohmann::json::parse(span, nullptr, false);
    if (j.is_discarded() || !j.is_object()) continue;
    const bool has_p = j.contains("probability");
    const bool has_c = j.contains("collaborate");
    if (!has_p && !has_c) continue;
    if (has_p) {
      auto p = probability_field(j["probability"]);
      if (!p) return std::nullopt;
      return from_probability(*p);
    }
    auto v = verdict_field(j["collaborate"]);
    if (!v) return std::nullopt;
    return ParsedVerdict{*v, *v ? 1.0 : 0.0};
  }
  return std::nullopt;
}

std::optional<ParsedVerdict> try_token(std::string_view raw) {
  std::size_t i = 0;
  while (i < raw.size()) {
    while (i < raw.size() && !std::isalpha(static_cast<unsigned char>(raw[i]))) ++i;
    std::size_t j = i;
    while (j < raw.size() && std::isalpha(static_cast<unsigned char>(raw[j]))) ++j;
    if (j > i) {
      auto word = to_lower(raw.substr(i, j - i));
      if (word == "yes") return ParsedVerdict{true, 1.0};
      if (word == "no") return ParsedVerdict{false, 0.0};
    }
    i = j;
  }
  return std::nullopt;
}

}  // namespace

ParsedVerdict parse_response(std::string_view raw) {
  if (auto v = try_json(raw)) return *v;
  if (auto v = try_token(raw)) return *v;
  if (auto p = parse_double(trim(raw)))
    if (auto v = from_probability(*p)) return *v;
  throw UnparseableResponse(std::string(raw));
}

ChatEndpoint ChatEndpoint::from_env(std::string base_url) {
  ChatEndpoint e{std::move(base_url), {}};
  if (const char* key = std::getenv("LLM_API_KEY")) e.api_key = key;
  return e;
}

OpenAiChatBackend::OpenAiChatBackend(ChatEndpoint endpoint, std::shared_ptr<HttpTransport> transport)
    : endpoint_(std::move(endpoint)), transport_(std::move(transport)) {
  if (endpoint_.base_url.empty()) throw InvalidArgument("chat endpoint base URL is empty");
}

std::string OpenAiChatBackend::request_body(const std::string& model, const std::string& prompt) {
  nlohmann::json body = {{"model", model},
                         {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
                         {"temperature", 0}};
  return body.dump();
}

ChatResult OpenAiChatBackend::complete(const std::string& model, const std::string& prompt) {
  std::string url = endpoint_.base_url;
  while (!url.empty() && url.back() == '/') url.pop_back();
  url += "/chat/completions";
  Headers headers{{"Content-Type", "application/json"}};
  if (!endpoint_.api_key.empty()) headers.emplace_back("Authorization", "Bearer " + endpoint_.api_key);
  auto resp = transport_->post(url, request_body(model, prompt), headers);
  ChatResult r{resp.status, {}, {}};
  if (resp.status != 200) {
    r.error = fmt::format("HTTP {}", resp.status);
    return r;
  }
  auto j = nlohmann::json::parse(resp.body, nullptr, false);
  try {
    if (j.is_discarded()) throw std::runtime_error("invalid JSON");
    r.content = j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const std::exception&) {
    // A 200 with an unexpected shape is not worth retrying.
    r.status = -1;
    r.error = "malformed chat completion body";
  }
  return r;
}

MockChatBackend::MockChatBackend(std::uint64_t seed, Responder responder)
    : seed_(seed), responder_(std::move(responder)) {}

namespace {

std::vector<std::string> concept_line_items(std::string_view line) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= line.size()) {
    auto end = line.find(';', start);
    if (end == std::string_view::npos) end = line.size();
    auto item = to_lower(trim(line.substr(start, end - start)));
    if (!item.empty()) items.push_back(std::move(item));
    start = end + 1;
  }
  std::sort(items.begin(), items.end());
  return items;
}

}  // namespace

double MockChatBackend::probability_for(const std::string& prompt) const {
  std::vector<std::vector<std::string>> concept_lists;
  double aa = 0.0;
  std::istringstream in(prompt);
  std::string line;
  while (std::getline(in, line)) {
    std::string_view l(line);
    if (l.starts_with(kConceptsPrefix)) concept_lists.push_back(concept_line_items(l.substr(kConceptsPrefix.size())));
    if (l.starts_with(kNetworkPrefix)) {
      auto eq = l.find('=');
      auto comma = l.find(',', eq);
      if (eq != std::string_view::npos)
        aa = parse_double(trim(l.substr(eq + 1, comma == std::string_view::npos ? l.npos : comma - eq - 1)))
                 .value_or(0.0);
    }
  }
  std::size_t overlap = 0;
  if (concept_lists.size() == 2) {
    std::vector<std::string> common;
    std::set_intersection(concept_lists[0].begin(), concept_lists[0].end(), concept_lists[1].begin(),
                          concept_lists[1].end(), std::back_inserter(common));
    overlap = common.size();
  }
  const double jitter = unit_from_bits(derive_seed(seed_, fnv1a64(prompt))) - 0.5;
  const double z = -1.2 + 0.7 * static_cast<double>(overlap) + 0.5 * aa + 1.6 * jitter;
  const double p = 1.0 / (1.0 + std::exp(-z));
  return std::round(std::clamp(p, 0.01, 0.99) * 1000.0) / 1000.0;
}

ChatResult MockChatBackend::complete(const std::string& /*model*/, const std::string& prompt) {
  const std::size_t index = calls_.fetch_add(1);
  if (responder_) return responder_(prompt, index);
  const double p = probability_for(prompt);
  return {200, fmt::format("{{\"collaborate\":\"{}\",\"probability\":{}}}", p >= 0.5 ? "yes" : "no", format_number(p)),
          {}};
}

LlmCache::LlmCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

std::string LlmCache::key(std::string_view model, PromptVariant variant, std::string_view prompt) {
  std::string material;
  material.reserve(model.size() + prompt.size() + 32);
  material.append(model).append(1, '\0').append(to_string(variant)).append(1, '\0').append(prompt);
  return sha256_hex(material);
}

std::optional<std::string> LlmCache::get(const std::string& key) const {
  if (!enabled()) return std::nullopt;
  std::shared_lock lock(mu_);
  auto text = read_file(dir_ / (key + ".json"));
  if (!text) return std::nullopt;
  auto j = nlohmann::json::parse(*text, nullptr, false);
  if (j.is_discarded() || !j.contains("response") || !j["response"].is_string()) return std::nullopt;
  return j["response"].get<std::string>();
}

void LlmCache::put(const std::string& key, std::string_view model, PromptVariant variant, std::string_view response) {
  if (!enabled()) return;
  nlohmann::json j = {{"model", model}, {"variant", to_string(variant)}, {"response", response}};
  std::unique_lock lock(mu_);
  write_file_atomic(dir_ / (key + ".json"), j.dump() + "\n");
}

namespace {

struct CallOutcome {
  bool ok = false;
  std::string content;
  std::string error;
};

CallOutcome call_with_retries(ChatBackend& backend, const LlmConfig& cfg, RateLimiter& limiter,
                              const std::string& prompt) {
  CallOutcome out;
  const int attempts = std::max(1, cfg.retry.max_attempts);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    limiter.acquire();
    ChatResult r;
    try {
      r = backend.complete(cfg.model, prompt);
    } catch (const std::exception& e) {
      r = {0, {}, e.what()};
    }
    if (r.status == 200) {
      out.ok = true;
      out.content = std::move(r.content);
      return out;
    }
    out.error = r.error.empty() ? fmt::format("HTTP {}", r.status) : r.error;
    if (!is_retryable_status(r.status)) break;
    if (attempt + 1 < attempts) cfg.retry.wait(cfg.retry.backoff(attempt));
  }
  out.error = fmt::format("request failed: {}", out.error);
  return out;
}

}  // namespace

std::vector<LlmResult> predict(std::span<const LlmRequest> requests, PromptVariant variant, ChatBackend& backend,
                               const LlmConfig& config) {
  LlmCache cache(config.cache_dir);
  RateLimiter limiter(config.requests_per_minute / 60.0);
  std::vector<LlmResult> results(requests.size());

  parallel_for(requests.size(), std::max(1u, config.concurrency), [&](std::size_t i) {
    const auto& req = requests[i];
    auto& res = results[i];
    res.u = req.u;
    res.v = req.v;
    if (!req.error.empty()) {
      res.error = req.error;
      return;
    }
    auto succeed = [&](const ParsedVerdict& pv, std::string raw, bool cached) {
      res.prediction = LlmPrediction{req.u, req.v, pv.collaborate, pv.probability, raw, variant, config.model, cached};
      res.raw_response = std::move(raw);
    };

    const auto key = LlmCache::key(config.model, variant, req.prompt);
    if (auto hit = cache.get(key)) {
      try {
        succeed(parse_response(*hit), *hit, true);
        return;
      } catch (const UnparseableResponse&) {
        // Stale or foreign cache entry: fall through to a fresh request.
      }
    }

    std::string prompt = req.prompt;
    for (int round = 0; round < 2; ++round) {
      auto call = call_with_retries(backend, config, limiter, prompt);
      if (!call.ok) {
        res.error = call.error;
        return;
      }
      res.raw_response = call.content;
      try {
        auto pv = parse_response(call.content);
        cache.put(key, config.model, variant, call.content);
        succeed(pv, call.content, false);
        return;
      } catch (const UnparseableResponse&) {
        prompt = req.prompt + std::string(kReprompt);
      }
    }
    res.error = "unparseable response after reprompt";
  });
  return results;
}

}  // namespace coauthlp
