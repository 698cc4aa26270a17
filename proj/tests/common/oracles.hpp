#pragma once

// Brute-force reference implementations used by the unit and acceptance
// tests. They work from plain edge lists and std::set adjacency and share no
// code with the library beyond the RNG.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "coauthlp/graph.hpp"
#include "coauthlp/rng.hpp"

namespace oracle {

using Pair = std::pair<coauthlp::NodeId, coauthlp::NodeId>;

/// Erdos-Renyi graph on n nodes with edge probability p, canonical u < v pairs.
inline std::vector<Pair> random_pairs(std::size_t n, double p, coauthlp::Rng& rng) {
  std::vector<Pair> out;
  for (coauthlp::NodeId u = 0; u < n; ++u)
    for (coauthlp::NodeId v = u + 1; v < n; ++v)
      if (rng.uniform() < p) out.emplace_back(u, v);
  return out;
}

struct Adjacency {
  std::vector<std::set<coauthlp::NodeId>> nb;

  Adjacency(std::size_t n, const std::vector<Pair>& pairs) : nb(n) {
    for (auto [u, v] : pairs) {
      nb[u].insert(v);
      nb[v].insert(u);
    }
  }
  std::size_t n() const { return nb.size(); }
  double deg(coauthlp::NodeId u) const { return static_cast<double>(nb[u].size()); }
  bool adjacent(coauthlp::NodeId u, coauthlp::NodeId v) const { return nb[u].count(v) > 0; }
  std::vector<coauthlp::NodeId> common(coauthlp::NodeId u, coauthlp::NodeId v) const {
    std::vector<coauthlp::NodeId> out;
    for (auto w : nb[u])
      if (nb[v].count(w)) out.push_back(w);
    return out;
  }

  double cn(coauthlp::NodeId u, coauthlp::NodeId v) const { return static_cast<double>(common(u, v).size()); }
  double jc(coauthlp::NodeId u, coauthlp::NodeId v) const {
    std::set<coauthlp::NodeId> uni = nb[u];
    uni.insert(nb[v].begin(), nb[v].end());
    return uni.empty() ? 0.0 : cn(u, v) / static_cast<double>(uni.size());
  }
  double aa(coauthlp::NodeId u, coauthlp::NodeId v) const {
    double s = 0;
    for (auto w : common(u, v)) s += 1.0 / std::log(deg(w));
    return s;
  }
  double ra(coauthlp::NodeId u, coauthlp::NodeId v) const {
    double s = 0;
    for (auto w : common(u, v)) s += 1.0 / deg(w);
    return s;
  }
  double pa(coauthlp::NodeId u, coauthlp::NodeId v) const { return deg(u) * deg(v); }
};

/// Mann-Whitney over every (positive, negative) pair; ties count one half.
inline double auroc(const std::vector<double>& s, const std::vector<std::uint8_t>& y) {
  std::uint64_t twice_wins = 0, pos = 0, neg = 0;
  for (std::size_t i = 0; i < s.size(); ++i) (y[i] ? pos : neg)++;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!y[i]) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j]) continue;
      if (s[i] > s[j]) twice_wins += 2;
      else if (s[i] == s[j]) twice_wins += 1;
    }
  }
  return static_cast<double>(twice_wins) / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
}

/// Unnormalised-weight modularity straight from the definition
/// Q = 1/2m * sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j).
inline double modularity(std::size_t n, const std::vector<std::pair<Pair, double>>& weighted,
                         const std::vector<int>& community) {
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (const auto& [p, w] : weighted) {
    a[p.first][p.second] += w;
    a[p.second][p.first] += w;
  }
  std::vector<double> k(n, 0.0);
  double two_m = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      k[i] += a[i][j];
      two_m += a[i][j];
    }
  double q = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (community[i] >= 0 && community[i] == community[j]) q += a[i][j] - k[i] * k[j] / two_m;
  return q / two_m;
}

/// Every non-adjacent pair inside `scope` that shares a neighbour.
inline std::set<Pair> two_hop_pairs(const Adjacency& g, const std::vector<bool>& scope) {
  std::set<Pair> out;
  for (coauthlp::NodeId u = 0; u < g.n(); ++u)
    for (coauthlp::NodeId v = u + 1; v < g.n(); ++v)
      if (scope[u] && scope[v] && !g.adjacent(u, v) && !g.common(u, v).empty()) out.emplace(u, v);
  return out;
}

}  // namespace oracle
