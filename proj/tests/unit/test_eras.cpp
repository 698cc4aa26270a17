#include <doctest.h>

#include <set>
#include <sstream>

#include "coauthlp/eras.hpp"
#include "coauthlp/error.hpp"
#include "oracles.hpp"

using namespace coauthlp;

TEST_CASE("default eras are valid and ordered") {
  auto eras = default_eras();
  REQUIRE(eras.size() == 3);
  for (const auto& e : eras) CHECK_NOTHROW(e.validate());
  CHECK(eras[0].eval_window == YearRange{2008, 2009});
  CHECK(eras[2].train_windows.front() == YearRange{2018, 2019});
  EraConfig bad{"bad", {{2004, 2006}}, {2006, 2007}};
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("two-year windows") {
  auto w = two_year_windows(2004, 2009);
  REQUIRE(w.size() == 3);
  CHECK(w[2] == YearRange{2008, 2009});
}

TEST_CASE("edge classes follow set membership") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 3 + rng.below(25);
    auto tp = oracle::random_pairs(n, 0.2, rng);
    auto ep = oracle::random_pairs(n, 0.2, rng);
    auto cls = classify_edges(GraphSnapshot::from_pairs(n, tp), GraphSnapshot::from_pairs(n, ep));
    std::set<oracle::Pair> t(tp.begin(), tp.end()), e(ep.begin(), ep.end());
    for (const auto& c : cls.edges) {
      oracle::Pair p{c.u, c.v};
      auto expected = t.count(p) && e.count(p) ? EdgeClass::Continued : e.count(p) ? EdgeClass::New : EdgeClass::Dropped;
      CHECK(c.cls == expected);
    }
    std::set<oracle::Pair> uni = t;
    uni.insert(e.begin(), e.end());
    CHECK(cls.edges.size() == uni.size());
  }
}

TEST_CASE("window statistics from an edge list") {
  std::istringstream in("src,dst,year\na,b,2004\nb,c,2005\na,b,2006\nc,d,2006\nd,e,2007\ne,a,2007\n");
  auto data = ingest_edges(in).data;
  auto stats = window_stats(data, two_year_windows(2004, 2007));
  REQUIRE(stats.size() == 2);
  CHECK(stats[0].authors == 3);
  CHECK(stats[0].edges == 2);
  CHECK(stats[1].edges == 4);
  CHECK(*stats[1].edge_growth == doctest::Approx(2.0));
  CHECK(*stats[1].author_growth == doctest::Approx(5.0 / 3.0));
  CHECK(stats[0].avg_degree == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("boundary rules") {
  auto s = stats_from_counts({{1, 1}, {2, 2}, {3, 3}, {4, 4}}, {100, 110, 130, 131}, {100, 250, 240, 300});
  auto b = detect_boundaries(s);
  REQUIRE(b.size() == 2);
  CHECK(b[0].before_window == 1);
  CHECK(b[0].kind == BoundaryKind::Spike);
  CHECK(b[1].before_window == 2);
  CHECK(b[1].kind == BoundaryKind::Deceleration);
  CHECK_THROWS_AS(detect_boundaries({s[0]}), InvalidArgument);
}
