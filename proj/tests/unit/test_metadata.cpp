#include <doctest.h>

#include <sstream>

#include "coauthlp/error.hpp"
#include "coauthlp/metadata.hpp"
#include "coauthlp/profiles.hpp"

using namespace coauthlp;

namespace {

AuthorProfile profile(std::string id, std::vector<std::string> concepts, std::string country = "",
                      std::optional<std::string> ethnicity = std::nullopt, std::string institution = "") {
  AuthorProfile p;
  p.id = std::move(id);
  p.concepts = std::move(concepts);
  p.country_code = std::move(country);
  p.ethnicity = std::move(ethnicity);
  p.institution = std::move(institution);
  p.works_count = 10;
  p.cited_by_count = 100;
  return p;
}

}  // namespace

TEST_CASE("concept overlap normalises case and whitespace") {
  auto a = profile("a", {"Machine Learning", " Robotics", "Planning"});
  auto b = profile("b", {"machine learning", "robotics ", "Vision"});
  CHECK(concept_overlap(a, b) == 2);
  CHECK(concept_jaccard(a, b) == doctest::Approx(2.0 / 4));
  CHECK(concept_jaccard(profile("x", {}), profile("y", {})) == 0.0);
  CHECK(count_product(a, b, CountField::Works) == 100.0);
  CHECK(count_product(a, b, CountField::CitedBy) == 10000.0);
}

TEST_CASE("socio-cultural indicators and missing values") {
  auto a = profile("a", {}, "US", "White", "MIT ");
  auto b = profile("b", {}, "CA", std::nullopt, "mit");
  auto f = sociocultural_features(a, b);
  CHECK(f.same_country == 0);
  CHECK(f.same_continent == 1);  // both North America through the country fallback
  CHECK_FALSE(f.same_ethnicity);
  CHECK(f.same_institution == 1);
  auto none = pair_features(&a, nullptr);
  CHECK(none == PairFeatureVector{});
  auto all = pair_features(&a, &b);
  CHECK(feature_value(all, "same_continent") == 1.0);
  CHECK(feature_value(all, "concept_overlap") == 0.0);
  CHECK(feature_names().size() == 8);
}

TEST_CASE("homophily ratio") {
  std::vector<std::optional<int>> same{1, 1, 0, std::nullopt, 1, 0, 0, 0};
  std::vector<Label> y{1, 1, 1, 1, 0, 0, 0, 0};
  auto r = homophily_ratio(same, y, "x");
  CHECK(r.positives == 3);
  CHECK(r.negatives == 4);
  CHECK(*r.collab_rate == doctest::Approx(2.0 / 3));
  CHECK(*r.noncollab_rate == doctest::Approx(0.25));
  CHECK(*r.ratio == doctest::Approx((2.0 / 3) / 0.25));
  std::vector<std::optional<int>> zero{1, 0, 0};
  CHECK_FALSE(homophily_ratio(zero, std::vector<Label>{1, 0, 0}).ratio);
  CHECK_THROWS_AS(homophily_ratio(zero, std::vector<Label>{0, 0, 0}), InvalidArgument);
}

TEST_CASE("feature AUROC table skips missing values") {
  auto a = profile("a", {"x", "y"}, "US");
  auto b = profile("b", {"x"}, "US");
  auto c = profile("c", {"z"}, "FR");
  std::vector<PairFeatureVector> pairs{pair_features(&a, &b), pair_features(&a, &c), pair_features(&a, nullptr)};
  std::vector<Label> y{1, 0, 1};
  std::vector<std::string> names{"concept_overlap", "same_ethnicity"};
  auto rows = feature_auroc_table(pairs, y, names);
  CHECK(rows[0].pairs == 2);
  CHECK(*rows[0].auroc == 1.0);
  CHECK_FALSE(rows[1].auroc);
  CHECK_FALSE(rows[1].note.empty());
}

TEST_CASE("profiles read and write JSON lines") {
  std::istringstream in(
      "# prov\n"
      R"({"id":"A1","display_name":"X","concepts":["a","b","a"],"country_code":"US"})" "\n"
      "\n"
      R"({"id":"A1","display_name":"Y"})" "\n");
  auto r = ingest_profiles(in);
  CHECK(r.profiles.size() == 1);
  CHECK(r.profiles.find("A1")->display_name == "Y");
  CHECK(r.warnings.size() == 1);
  std::istringstream bad(R"({"display_name":"no id"})" "\n");
  CHECK_THROWS_AS(ingest_profiles(bad), ParseError);
  CHECK(dedupe_concepts({"a", "b", "a"}) == std::vector<std::string>{"a", "b"});
  CHECK(continent_for_country("JP") == "Asia");

  ProfileStore store;
  store.upsert(profile("B", {"q"}, "DE", "White"));
  std::ostringstream out;
  write_profiles_jsonl(store, out);
  std::istringstream back(out.str());
  auto expected = *store.find("B");
  expected.continent = "Europe";  // derived from the country on read
  CHECK(*ingest_profiles(back).profiles.find("B") == expected);
}
