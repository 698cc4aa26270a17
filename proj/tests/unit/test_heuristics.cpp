#include <doctest.h>

#include <cmath>

#include "coauthlp/error.hpp"
#include "coauthlp/heuristics.hpp"
#include "oracles.hpp"

using namespace coauthlp;

TEST_CASE("heuristics agree with brute force on random graphs") {
  Rng rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    std::size_t n = 2 + rng.below(29);
    auto pairs = oracle::random_pairs(n, 0.1 + 0.4 * rng.uniform(), rng);
    auto g = GraphSnapshot::from_pairs(n, pairs);
    oracle::Adjacency a(n, pairs);
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = 0; v < n; ++v) {
        if (u == v) continue;
        CHECK(common_neighbors(g, u, v) == a.cn(u, v));
        CHECK(preferential_attachment(g, u, v) == a.pa(u, v));
        CHECK(std::abs(jaccard(g, u, v) - a.jc(u, v)) <= 1e-12);
        CHECK(std::abs(adamic_adar(g, u, v) - a.aa(u, v)) <= 1e-12);
        CHECK(std::abs(resource_allocation(g, u, v) - a.ra(u, v)) <= 1e-12);
      }
  }
}

TEST_CASE("adamic-adar of a worked example") {
  // u and v share w1 (degree 2) and w2 (degree 3).
  std::vector<std::pair<NodeId, NodeId>> p{{0, 2}, {1, 2}, {0, 3}, {1, 3}, {3, 4}};
  auto g = GraphSnapshot::from_pairs(5, p);
  CHECK(adamic_adar(g, 0, 1) == doctest::Approx(1 / std::log(2.0) + 1 / std::log(3.0)));
  CHECK(resource_allocation(g, 0, 1) == doctest::Approx(0.5 + 1.0 / 3));
  CHECK(jaccard(g, 0, 1) == doctest::Approx(1.0));
}

TEST_CASE("edge weight, random and batch scoring") {
  std::vector<std::pair<NodeId, NodeId>> p{{0, 1}, {0, 1}, {1, 2}};
  auto g = GraphSnapshot::from_pairs(3, p);
  CHECK(edge_weight_score(g, 0, 1) == 2.0);
  CHECK_THROWS_AS(edge_weight_score(g, 0, 2), InvalidArgument);
  CHECK_THROWS_AS(common_neighbors(g, 0, 7), InvalidArgument);
  CHECK(random_score(5, 1) == random_score(5, 1));
  CHECK(random_score(5, 1) != random_score(5, 2));

  std::vector<NodePair> pairs{{0, 2}, {0, 1}};
  std::vector<Heuristic> methods{Heuristic::CN, Heuristic::Random, Heuristic::PA};
  auto one = score_batch(g, pairs, methods, 9, 1);
  auto four = score_batch(g, pairs, methods, 9, 4);
  REQUIRE(one.size() == 6);
  for (std::size_t i = 0; i < one.size(); ++i) CHECK(one[i].value == four[i].value);
  CHECK(one[0].value == 1.0);
  CHECK(one[2].value == 1.0);  // degrees ignore weights
  CHECK(one[1].value == random_score(9, 0));
}

TEST_CASE("heuristic names round-trip") {
  for (auto h : {Heuristic::CN, Heuristic::JC, Heuristic::AA, Heuristic::PA, Heuristic::RA, Heuristic::EdgeWeight,
                 Heuristic::Random})
    CHECK(parse_heuristic(to_string(h)) == h);
  CHECK_FALSE(parse_heuristic("XX"));
}
