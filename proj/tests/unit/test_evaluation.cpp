#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "coauthlp/error.hpp"
#include "coauthlp/evaluation.hpp"
#include "oracles.hpp"

using namespace coauthlp;

TEST_CASE("auroc equals brute-force Mann-Whitney") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 2 + rng.below(60);
    std::vector<double> s(n);
    std::vector<Label> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.below(8));  // plenty of ties
      y[i] = rng.uniform() < 0.3;
    }
    y[0] = 1;
    y[1] = 0;
    CHECK(std::abs(auroc(s, y) - oracle::auroc(s, y)) <= 1e-12);
  }
}

TEST_CASE("auroc edge cases") {
  std::vector<double> s{1, 2, 3};
  CHECK_THROWS_AS(auroc(s, std::vector<Label>{1, 1, 1}), InvalidArgument);
  CHECK_THROWS_AS(auroc(s, std::vector<Label>{1, 0}), InvalidArgument);
  CHECK_THROWS_AS(auroc(std::vector<double>{NAN, 1}, std::vector<Label>{1, 0}), InvalidArgument);
  CHECK(auroc(std::vector<double>{0, 0, 0}, std::vector<Label>{1, 0, 0}) == 0.5);
  CHECK(auroc(s, std::vector<Label>{0, 0, 1}) == 1.0);
}

TEST_CASE("recall and precision at a threshold") {
  std::vector<double> s{0.9, 0.6, 0.5, 0.2, 0.7};
  std::vector<Label> y{1, 1, 0, 1, 0};
  auto r = recall_precision(s, y, 0.5);
  CHECK(r.tp == 2);
  CHECK(r.fn == 1);
  CHECK(r.fp == 2);
  CHECK(r.tn == 0);
  CHECK(r.recall == doctest::Approx(2.0 / 3));
  CHECK(*r.precision == doctest::Approx(0.5));
  CHECK(r.fpr == 1.0);
  CHECK_FALSE(recall_precision(s, y, 5.0).precision);
}

TEST_CASE("quantile bins and calibration") {
  std::vector<double> s{5, 1, 2, 2, 3, 4, 6, 7, 8, 9};
  auto b = quantile_bins(s, 5);
  CHECK(b[1] == 0);
  CHECK(b[2] == 0);
  CHECK(b[3] == 0);  // tie takes its lowest rank's bin
  CHECK(b[9] == 4);
  std::vector<double> aa(20);
  std::vector<Label> verdict(20), label(20);
  for (int i = 0; i < 20; ++i) {
    aa[i] = i;
    label[i] = i % 2;
    verdict[i] = i >= 10;
  }
  auto rows = calibration_by_decile(aa, verdict, label);
  REQUIRE(rows.size() == 10);
  CHECK(rows[0].pairs == 2);
  CHECK(*rows[0].tpr == 0.0);
  CHECK(*rows[9].fpr == 1.0);
}

TEST_CASE("spearman") {
  std::vector<double> x{1, 2, 3, 4}, y{10, 20, 30, 40}, z{4, 3, 2, 1};
  CHECK(spearman(x, y) == doctest::Approx(1.0));
  CHECK(spearman(x, z) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(spearman(x, std::vector<double>{1, 1, 1, 1}), InvalidArgument);
}

TEST_CASE("agreement quadrants use the median positive AA") {
  std::vector<double> aa{1, 2, 3, 4, 9};
  std::vector<double> llm{0.9, 0.2, 0.8, 0.1, 0.9};
  std::vector<Label> y{1, 1, 1, 1, 0};
  auto q = agreement_quadrants(aa, llm, y);
  CHECK(q.counts.aa_threshold == 2.5);
  CHECK(q.counts.both_catch == 1);
  CHECK(q.counts.aa_only == 1);
  CHECK(q.counts.llm_only == 1);
  CHECK(q.counts.both_miss == 1);
  CHECK_FALSE(q.category[4]);
  CHECK_THROWS_AS(agreement_quadrants(aa, llm, std::vector<Label>(5, 0)), InvalidArgument);
}

TEST_CASE("stratified samples are deterministic and respect quotas") {
  Rng rng(2);
  std::vector<double> aa(3000);
  std::vector<Label> y(3000);
  for (std::size_t i = 0; i < aa.size(); ++i) {
    aa[i] = rng.uniform();
    y[i] = rng.uniform() < 0.05;
  }
  auto nat = stratified_sample(aa, y, SamplePlan::natural(7, 1000));
  CHECK(nat.indices.size() == 1000);
  CHECK(std::is_sorted(nat.indices.begin(), nat.indices.end()));
  CHECK(std::adjacent_find(nat.indices.begin(), nat.indices.end()) == nat.indices.end());
  CHECK(nat.strata.size() == 10);
  for (const auto& s : nat.strata) CHECK(s.drawn == 100);
  CHECK(stratified_sample(aa, y, SamplePlan::natural(7, 1000)).indices == nat.indices);
  CHECK(stratified_sample(aa, y, SamplePlan::natural(8, 1000)).indices != nat.indices);

  auto bal = stratified_sample(aa, y, SamplePlan::balanced(7, 200));
  std::size_t pos = 0;
  for (auto i : bal.indices) pos += y[i];
  CHECK(pos == 100);
  CHECK(bal.indices.size() == 200);

  auto all = stratified_sample(aa, y, SamplePlan::natural(7, 5000));
  CHECK(all.indices.size() == 3000);
  CHECK_FALSE(all.warnings.empty());
}

namespace {

EvalReport sample_report() {
  EvalReport r;
  r.era = "era1";
  r.provenance = {{"seed", 1}, {"config_hash", "abc"}, {"tool_version", "t"}};
  r.sample.mode = "natural";
  r.sample.drawn = 10;
  r.sample.positives = 3;
  r.sample.negatives = 7;
  MethodMetrics m;
  m.method = "AA";
  m.auroc = 0.75;
  m.threshold = 1.5;
  m.at_threshold = ConfusionRates{2, 1, 6, 1, 2.0 / 3, 2.0 / 3, 2.0 / 3, 1.0 / 7};
  r.methods.push_back(m);
  MethodMetrics undefined;
  undefined.method = "LLM";
  undefined.note = "degenerate labels";
  r.methods.push_back(undefined);
  r.quadrants = QuadrantCounts{1, 1, 0, 1, 1.5, 0.5};
  r.quadrant_positives = 3;
  r.spearman["AA~LLM"] = 0.4;
  r.tables["t"] = Table{{"a", "b"}, {{"1", "2"}}};
  return r;
}

}  // namespace

TEST_CASE("report round-trips through JSON and validates") {
  auto r = sample_report();
  nlohmann::json j = r;
  CHECK(validate_report(j).empty());
  CHECK(j.get<EvalReport>() == r);

  auto broken = j;
  broken["sample"]["positives"] = 4;
  CHECK_FALSE(validate_report(broken).empty());
  broken = j;
  broken["methods"][1]["note"] = "";
  CHECK_FALSE(validate_report(broken).empty());
  broken = j;
  broken.erase("provenance");
  CHECK_FALSE(validate_report(broken).empty());
}

TEST_CASE("report files carry provenance") {
  auto dir = std::filesystem::temp_directory_path() / "coauthlp_report_test";
  std::filesystem::remove_all(dir);
  auto files = emit_report(sample_report(), dir, "prov");
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(std::filesystem::exists(dir / "t.csv"));
  std::ostringstream os;
  write_table_csv(os, Table{{"x"}, {{"a,b"}}}, "prov");
  CHECK(os.str() == "# prov\nx\n\"a,b\"\n");
  std::filesystem::remove_all(dir);
}
