#include <doctest.h>

#include <cmath>

#include "coauthlp/community.hpp"
#include "coauthlp/error.hpp"
#include "oracles.hpp"

using namespace coauthlp;

namespace {

std::vector<std::pair<NodeId, NodeId>> two_cliques() {
  std::vector<std::pair<NodeId, NodeId>> p;
  for (NodeId base : {0u, 4u})
    for (NodeId i = 0; i < 4; ++i)
      for (NodeId j = i + 1; j < 4; ++j) p.emplace_back(base + i, base + j);
  p.emplace_back(3, 4);
  return p;
}

}  // namespace

TEST_CASE("louvain recovers two planted cliques") {
  auto g = GraphSnapshot::from_pairs(8, two_cliques());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto a = louvain(g, {seed});
    CHECK(a.community_count() == 2);
    for (NodeId u = 1; u < 4; ++u) CHECK(a.community_of[u] == a.community_of[0]);
    for (NodeId u = 5; u < 8; ++u) CHECK(a.community_of[u] == a.community_of[4]);
    CHECK(a.community_of[0] != a.community_of[4]);
  }
}

TEST_CASE("modularity agrees with the definition and never decreases across levels") {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 5 + rng.below(40);
    auto pairs = oracle::random_pairs(n, 0.15, rng);
    if (pairs.empty()) continue;
    // Duplicate some edges so weights matter.
    auto weighted = pairs;
    for (std::size_t i = 0; i < pairs.size(); i += 3) weighted.push_back(pairs[i]);
    auto g = GraphSnapshot::from_pairs(n, weighted);
    auto a = louvain(g, {static_cast<std::uint64_t>(trial)});
    std::vector<std::pair<oracle::Pair, double>> w;
    g.for_each_edge([&](NodeId u, NodeId v, Weight x) { w.push_back({{u, v}, static_cast<double>(x)}); });
    std::vector<int> comm(a.community_of.begin(), a.community_of.end());
    CHECK(std::abs(a.modularity - oracle::modularity(n, w, comm)) <= 1e-9);
    CHECK(std::abs(modularity(g, a.community_of) - a.modularity) <= 1e-9);
    for (std::size_t i = 1; i < a.level_modularity.size(); ++i)
      CHECK(a.level_modularity[i] >= a.level_modularity[i - 1] - 1e-12);
    for (NodeId u = 0; u < n; ++u) CHECK((a.community_of[u] == kUnassigned) == !g.active(u));
  }
}

TEST_CASE("louvain is deterministic under a seed and rejects edgeless graphs") {
  Rng rng(4);
  auto g = GraphSnapshot::from_pairs(60, oracle::random_pairs(60, 0.08, rng));
  CHECK(louvain(g, {3}).community_of == louvain(g, {3}).community_of);
  CHECK_THROWS_AS(louvain(GraphSnapshot::from_pairs(3, {}), {}), InvalidArgument);
}

TEST_CASE("top community selection and pair labels") {
  CommunityAssignment a;
  a.community_of = {1, 0, 1, 2, 1, 0, kUnassigned};
  a.sizes = {2, 3, 1};
  auto top = select_top_community(a, 2);
  CHECK(top.ids == std::vector<CommunityId>{1, 0});
  CHECK(top.members[0] == std::vector<NodeId>{0, 2, 4});
  CHECK_FALSE(top.truncated);
  CHECK(select_top_community(a, 5).truncated);
  CHECK(label_pair_community(a, 0, 2) == PairCommunity::Intra);
  CHECK(label_pair_community(a, 0, 3) == PairCommunity::Cross);
  CHECK_THROWS_AS(label_pair_community(a, 0, 6), InvalidArgument);
  std::vector<std::pair<NodeId, NodeId>> pairs{{0, 2}, {0, 1}};
  CHECK(intra_rate(a, pairs) == 0.5);
}
