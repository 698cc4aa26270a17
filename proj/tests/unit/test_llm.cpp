#include <doctest.h>

#include <filesystem>

#include "coauthlp/error.hpp"
#include "coauthlp/llm.hpp"

using namespace coauthlp;

namespace {

AuthorProfile alice() {
  AuthorProfile p;
  p.id = "A1";
  p.display_name = "Alice Li";
  p.institution = "Tongji University";
  p.country_code = "CN";
  p.works_count = 12;
  p.cited_by_count = 340;
  p.concepts = {"Control theory", "Neural networks"};
  p.ethnicity = "Asian";
  return p;
}

AuthorProfile bob() {
  AuthorProfile p;
  p.id = "B2";
  p.display_name = "Bob Yang";
  p.works_count = 7;
  p.cited_by_count = 50;
  p.concepts = {"Neural networks"};
  return p;
}

const char* kBasePrompt =
    "You are given the profiles of two researchers. Predict whether these two researchers will co-author within "
    "the evaluation window (2008-2009).\n\n"
    "Researcher A\nName: Alice Li\nInstitution: Tongji University\nWorks count: 12\nCited-by count: 340\n"
    "Concepts: Control theory; Neural networks\n\n"
    "Researcher B\nName: Bob Yang\nInstitution: unknown\nWorks count: 7\nCited-by count: 50\n"
    "Concepts: Neural networks\n\n"
    "Respond with a JSON object of the form {\"collaborate\": \"yes\" or \"no\", \"probability\": <number between 0 "
    "and 1>}.\n";

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name) : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

LlmConfig fast_config() {
  LlmConfig c;
  c.requests_per_minute = 0;
  c.concurrency = 2;
  c.retry.sleep = [](std::chrono::milliseconds) {};
  return c;
}

}  // namespace

TEST_CASE("base prompt is byte-exact") {
  PromptExtras x;
  x.eval_window = "2008-2009";
  CHECK(build_prompt(alice(), bob(), PromptVariant::Base, x) == kBasePrompt);
}

TEST_CASE("prompt variants differ only where intended") {
  PromptExtras x;
  x.adamic_adar = 4.04;
  x.common_neighbors = 10;
  x.era_a = EraScopedCounts{3, 30, "Old Inst"};
  x.era_b = EraScopedCounts{1, 2, ""};
  auto base = build_prompt(alice(), bob(), PromptVariant::Base, x);
  auto country = build_prompt(alice(), bob(), PromptVariant::PlusCountry, x);
  CHECK(country.find("Country: CN\n") != std::string::npos);
  CHECK(country.find("Country: unknown\n") != std::string::npos);
  CHECK(country.find("Ethnicity") == std::string::npos);
  auto both = build_prompt(alice(), bob(), PromptVariant::PlusBoth, x);
  CHECK(both.find("Ethnicity: Asian\n") != std::string::npos);
  CHECK(both.find("Country: CN\n") != std::string::npos);
  auto net = build_prompt(alice(), bob(), PromptVariant::PlusNetworkStats, x);
  CHECK(net.find("Network statistics: Adamic-Adar = 4.04, common neighbors = 10\n") != std::string::npos);
  auto nc = build_prompt(alice(), bob(), PromptVariant::NoConcepts, x);
  CHECK(nc.find("Concepts") == std::string::npos);
  auto era = build_prompt(alice(), bob(), PromptVariant::EraRestricted, x);
  CHECK(era.find("Institution (training era): Old Inst\n") != std::string::npos);
  CHECK(era.find("Works count (training era): 3\n") != std::string::npos);
  CHECK(base.find("Network") == std::string::npos);
  CHECK_THROWS_AS(build_prompt(alice(), bob(), PromptVariant::PlusNetworkStats, {}), InvalidArgument);
  CHECK_THROWS_AS(build_prompt(alice(), bob(), PromptVariant::EraRestricted, {}), InvalidArgument);
  for (auto v : all_prompt_variants()) CHECK(parse_prompt_variant(to_string(v)) == v);
}

TEST_CASE("response parsing") {
  CHECK(parse_response(R"(Sure! {"collaborate": "yes", "probability": 0.85})") == ParsedVerdict{true, 0.85});
  CHECK(parse_response(R"({"collaborate": "yes", "probability": 0.2})") == ParsedVerdict{false, 0.2});
  CHECK(parse_response(R"({"collaborate": false})") == ParsedVerdict{false, 0.0});
  CHECK(parse_response("```json\n{\"probability\": \"0.6\"}\n```") == ParsedVerdict{true, 0.6});
  CHECK(parse_response("Yes, they will.") == ParsedVerdict{true, 1.0});
  CHECK(parse_response("no") == ParsedVerdict{false, 0.0});
  CHECK(parse_response("0.7") == ParsedVerdict{true, 0.7});
  CHECK_THROWS_AS(parse_response("I cannot say"), UnparseableResponse);
  CHECK_THROWS_AS(parse_response("1.7"), UnparseableResponse);
}

TEST_CASE("chat request body") {
  auto body = nlohmann::json::parse(OpenAiChatBackend::request_body("m", "hi"));
  CHECK(body["model"] == "m");
  CHECK(body["temperature"] == 0);
  CHECK(body["messages"][0]["content"] == "hi");
}

TEST_CASE("mock backend is deterministic and follows concept overlap") {
  MockChatBackend mock(3);
  PromptExtras x;
  auto p = build_prompt(alice(), bob(), PromptVariant::Base, x);
  CHECK(mock.probability_for(p) == mock.probability_for(p));
  auto r = mock.complete("m", p);
  CHECK(r.status == 200);
  CHECK(parse_response(r.content).probability == mock.probability_for(p));
}

TEST_CASE("predict retries, reprompts, records errors and caches") {
  TempDir dir("coauthlp_llm_cache_test");
  auto cfg = fast_config();
  cfg.cache_dir = dir.path;
  std::vector<LlmRequest> reqs{{0, 1, "first", ""}, {0, 2, "second", ""}, {1, 2, "", "missing-profile"},
                               {2, 3, "third", ""}};
  auto first_calls = std::make_shared<std::atomic<int>>(0);
  MockChatBackend scripted(0, [first_calls](const std::string& prompt, std::size_t) -> ChatResult {
    if (prompt == "first") return (*first_calls)++ == 0 ? ChatResult{429, "", "rate"} : ChatResult{200, "0.9", ""};
    if (prompt == "second") return {200, "maybe", ""};
    if (prompt == std::string("second") + std::string(kReprompt)) return {200, R"({"probability": 0.3})", ""};
    return {400, "", "bad request"};
  });
  auto out = predict(reqs, PromptVariant::Base, scripted, cfg);
  REQUIRE(out.size() == 4);
  CHECK(out[0].prediction->probability == 0.9);
  CHECK(out[1].prediction->probability == 0.3);
  CHECK(out[2].error == "missing-profile");
  CHECK_FALSE(out[3].prediction);
  CHECK(out[3].error.find("bad request") != std::string::npos);
  CHECK(scripted.calls() == 5);

  auto again = predict(reqs, PromptVariant::Base, scripted, cfg);
  CHECK(again[0].prediction->cached);
  CHECK(again[1].prediction->cached);
  CHECK(scripted.calls() == 6);  // only the failing request goes out again
  CHECK(LlmCache::key("m", PromptVariant::Base, "p") != LlmCache::key("m", PromptVariant::PlusBoth, "p"));
}
