#include <doctest.h>

#include <set>

#include "coauthlp/candidates.hpp"
#include "coauthlp/community.hpp"
#include "coauthlp/error.hpp"
#include "oracles.hpp"

using namespace coauthlp;

TEST_CASE("streamed candidates equal brute-force enumeration") {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 2 + rng.below(59);
    auto pairs = oracle::random_pairs(n, 0.05 + 0.2 * rng.uniform(), rng);
    auto g = GraphSnapshot::from_pairs(n, pairs);
    oracle::Adjacency a(n, pairs);
    std::vector<bool> in_scope(n);
    std::vector<NodeId> members;
    for (NodeId u = 0; u < n; ++u)
      if ((in_scope[u] = rng.uniform() < 0.7)) members.push_back(u);
    auto expected = oracle::two_hop_pairs(a, in_scope);
    for (unsigned workers : {1u, 3u}) {
      std::set<oracle::Pair> got;
      std::vector<oracle::Pair> order;
      for_each_candidate(
          g, NodeScope(n, members),
          [&](NodeId u, NodeId v, std::uint32_t cn) {
            CHECK(cn == a.common(u, v).size());
            got.emplace(u, v);
            order.emplace_back(u, v);
          },
          workers);
      CHECK(got == expected);
      CHECK(order.size() == got.size());
      CHECK(std::is_sorted(order.begin(), order.end()));
    }
  }
}

TEST_CASE("candidates are labelled from the positive set") {
  std::vector<std::pair<NodeId, NodeId>> p{{0, 1}, {1, 2}, {2, 3}};
  auto g = GraphSnapshot::from_pairs(4, p);
  auto c = generate_candidates(g, NodeScope::all(g), {pair_key(2, 0)});
  REQUIRE(c.size() == 2);
  CHECK(c[0].u == 0);
  CHECK(c[0].v == 2);
  CHECK(c[0].positive);
  CHECK_FALSE(c[1].positive);
}

TEST_CASE("recall ceiling and cold-start partition") {
  std::vector<std::pair<NodeId, NodeId>> p{{0, 1}, {1, 2}, {3, 4}};
  auto g = GraphSnapshot::from_pairs(6, p);
  std::vector<NodePair> fresh{{0, 2}, {0, 3}, {2, 4}, {4, 5}};
  CHECK(recall_ceiling(g, fresh) == 0.25);
  auto part = partition_cold_start(g, fresh);
  CHECK(part.two_hop.size() == 1);
  CHECK(part.cold.size() == 3);
  CHECK_THROWS_AS(recall_ceiling(g, {}), InvalidArgument);
}

TEST_CASE("cold-start profile") {
  // Path 0-1-2-3 plus a separate edge 4-5.
  std::vector<std::pair<NodeId, NodeId>> p{{0, 1}, {1, 2}, {2, 3}, {4, 5}};
  auto g = GraphSnapshot::from_pairs(6, p);
  CommunityAssignment a;
  a.community_of = {0, 0, 1, 1, 2, 2};
  a.sizes = {2, 2, 2};
  std::vector<NodePair> fresh{{0, 2}, {0, 3}, {0, 4}};
  auto bins = default_degree_bins();
  std::vector<std::size_t> k{1, 2};
  auto s = cold_start_profile(g, fresh, bins, k, a);
  CHECK(s.new_edges == 3);
  CHECK(s.two_hop == 1);
  CHECK(s.cold == 2);
  CHECK(s.path_length_histogram.at(3) == 1);
  CHECK(s.path_length_histogram.at(kUnreachable) == 1);
  CHECK(*s.median_cold_distance == 3.0);
  CHECK(*s.cross_community_rate_cold == 1.0);
  CHECK(*s.cross_community_rate_two_hop == 1.0);
  CHECK(s.cold_rate_by_degree_bin[0].total == 3);  // node 0 has degree 1
  CHECK(shortest_path_length(g, 0, 3) == 3);
  CHECK(top_degree_nodes(g, 2) == std::vector<NodeId>{1, 2});
}

TEST_CASE("cold negatives have no common neighbour and are not adjacent") {
  Rng rng(8);
  auto pairs = oracle::random_pairs(50, 0.05, rng);
  auto g = GraphSnapshot::from_pairs(50, pairs);
  oracle::Adjacency a(50, pairs);
  auto pool = g.active_nodes();
  auto neg = sample_cold_negatives(g, pool, 40, 1);
  CHECK(neg.size() == 40);
  std::set<oracle::Pair> seen;
  for (auto [u, v] : neg) {
    CHECK_FALSE(a.adjacent(u, v));
    CHECK(a.common(u, v).empty());
    CHECK(seen.emplace(std::min(u, v), std::max(u, v)).second);
  }
  CHECK(sample_cold_negatives(g, pool, 40, 1) == neg);
}
