#include "coauthlp/openalex.hpp"

#include <algorithm>

#include "coauthlp/io.hpp"
#include "coauthlp/parallel.hpp"

namespace coauthlp {

using nlohmann::json;

std::string openalex_short_id(std::string_view id) {
  auto slash = id.find_last_of('/');
  if (slash != std::string_view::npos) id.remove_prefix(slash + 1);
  return std::string(id);
}

namespace {

std::string str_or_empty(const json& j, const char* key) {
  auto it = j.find(key);
  return it != j.end() && it->is_string() ? it->get<std::string>() : std::string();
}

std::uint64_t count_or_zero(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number()) return 0;
  auto v = it->get<double>();
  return v > 0 ? static_cast<std::uint64_t>(v) : 0;
}

}  // namespace

AuthorProfile parse_openalex_author(std::string_view body, std::string_view id) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed OpenAlex response: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("malformed OpenAlex response: not an object");

  AuthorProfile p;
  p.id = std::string(id);
  p.display_name = str_or_empty(j, "display_name");
  p.works_count = count_or_zero(j, "works_count");
  p.cited_by_count = count_or_zero(j, "cited_by_count");

  const json* inst = nullptr;
  if (auto it = j.find("last_known_institutions"); it != j.end() && it->is_array() && !it->empty())
    inst = &it->front();
  else if (auto it2 = j.find("last_known_institution"); it2 != j.end() && it2->is_object())
    inst = &*it2;
  if (inst) {
    p.institution = str_or_empty(*inst, "display_name");
    p.country_code = str_or_empty(*inst, "country_code");
    p.continent = continent_for_country(p.country_code);
  }

  const json* concepts = nullptr;
  for (const char* key : {"x_concepts", "concepts"}) {
    if (auto it = j.find(key); it != j.end() && it->is_array()) {
      concepts = &*it;
      break;
    }
  }
  if (concepts) {
    std::vector<std::pair<double, std::string>> scored;
    for (const auto& c : *concepts) {
      if (!c.is_object()) throw ParseError("malformed OpenAlex concept entry");
      auto name = str_or_empty(c, "display_name");
      if (name.empty()) continue;
      double score = c.contains("score") && c["score"].is_number() ? c["score"].get<double>() : 0.0;
      scored.emplace_back(score, std::move(name));
    }
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (auto& s : scored) p.concepts.push_back(std::move(s.second));
    p.concepts = dedupe_concepts(std::move(p.concepts));
  }
  return p;
}

OpenAlexClient::OpenAlexClient(OpenAlexConfig config, std::shared_ptr<HttpTransport> transport)
    : config_(std::move(config)), transport_(std::move(transport)), limiter_(config_.requests_per_second) {}

std::filesystem::path OpenAlexClient::cache_path(const std::string& short_id) const {
  return config_.cache_dir / (short_id + ".json");
}

AuthorProfile OpenAlexClient::fetch(std::string_view id) {
  const std::string short_id = openalex_short_id(id);
  if (short_id.empty()) throw InvalidArgument("empty OpenAlex author id");
  const bool use_cache = !config_.cache_dir.empty();
  if (use_cache) {
    if (auto cached = read_file(cache_path(short_id))) return parse_openalex_author(*cached, short_id);
  }
  if (!transport_) throw Error("no HTTP transport configured for OpenAlex");

  std::string url = config_.base_url + "/authors/" + short_id;
  if (!config_.mailto.empty()) url += "?mailto=" + config_.mailto;

  HttpResponse res;
  for (int attempt = 0; attempt < std::max(1, config_.retry.max_attempts); ++attempt) {
    if (attempt > 0) config_.retry.wait(config_.retry.backoff(attempt - 1));
    limiter_.acquire();
    ++network_calls_;
    res = transport_->get(url, {{"Accept", "application/json"}});
    if (res.status == 404) throw AuthorUnknown(short_id);
    if (!is_retryable_status(res.status)) break;
  }
  if (res.status != 200)
    throw Error("OpenAlex request for " + short_id + " failed with status " + std::to_string(res.status));

  auto profile = parse_openalex_author(res.body, short_id);
  if (use_cache) write_file_atomic(cache_path(short_id), res.body);
  return profile;
}

std::vector<FetchOutcome> OpenAlexClient::fetch_many(const std::vector<std::string>& ids, unsigned workers) {
  std::vector<FetchOutcome> out(ids.size());
  parallel_for(ids.size(), workers, [&](std::size_t i) {
    out[i].id = ids[i];
    try {
      out[i].profile = fetch(ids[i]);
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  });
  return out;
}

}  // namespace coauthlp
