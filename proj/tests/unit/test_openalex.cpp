#include <doctest.h>

#include <filesystem>
#include <map>

#include "coauthlp/error.hpp"
#include "coauthlp/openalex.hpp"

using namespace coauthlp;

namespace {

struct FakeTransport : HttpTransport {
  std::map<std::string, std::vector<HttpResponse>> scripted;
  std::vector<std::string> urls;
  HttpResponse get(const std::string& url, const Headers&) override {
    urls.push_back(url);
    auto& q = scripted[url];
    if (q.empty()) return {404, ""};
    auto r = q.front();
    if (q.size() > 1) q.erase(q.begin());
    return r;
  }
  HttpResponse post(const std::string&, const std::string&, const Headers&) override { return {500, ""}; }
};

const char* kAuthor = R"({
  "id": "https://openalex.org/A5",
  "display_name": "Degang Yang",
  "works_count": 120,
  "cited_by_count": 2400,
  "last_known_institutions": [{"display_name": "Tongji University", "country_code": "CN"}],
  "x_concepts": [{"display_name": "Physics", "score": 10.5},
                 {"display_name": "Control theory", "score": 80.1},
                 {"display_name": "Physics", "score": 5}]
})";

}  // namespace

TEST_CASE("OpenAlex author parsing") {
  auto p = parse_openalex_author(kAuthor, "A5");
  CHECK(p.display_name == "Degang Yang");
  CHECK(p.institution == "Tongji University");
  CHECK(p.continent == "Asia");
  CHECK(p.concepts == std::vector<std::string>{"Control theory", "Physics"});
  CHECK_THROWS_AS(parse_openalex_author("{", "A5"), ParseError);
  CHECK(openalex_short_id("https://openalex.org/A5") == "A5");
}

TEST_CASE("OpenAlex client retries, caches and reports unknown authors") {
  auto dir = std::filesystem::temp_directory_path() / "coauthlp_openalex_test";
  std::filesystem::remove_all(dir);
  auto t = std::make_shared<FakeTransport>();
  t->scripted["https://api.openalex.org/authors/A5"] = {{503, ""}, {200, kAuthor}};
  OpenAlexConfig cfg;
  cfg.cache_dir = dir;
  cfg.requests_per_second = 0;
  cfg.retry.sleep = [](std::chrono::milliseconds) {};
  OpenAlexClient client(cfg, t);
  CHECK(client.fetch("A5").works_count == 120);
  CHECK(client.network_calls() == 2);
  CHECK(client.fetch("https://openalex.org/A5").works_count == 120);
  CHECK(client.network_calls() == 2);
  CHECK_THROWS_AS(client.fetch("A404"), AuthorUnknown);
  auto many = client.fetch_many({"A5", "A404"}, 2);
  CHECK(many[0].profile);
  CHECK_FALSE(many[1].error.empty());
  std::filesystem::remove_all(dir);
}
