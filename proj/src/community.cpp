#include "coauthlp/community.hpp"

#include <algorithm>
#include <numeric>

#include "coauthlp/error.hpp"
#include "coauthlp/rng.hpp"

namespace coauthlp {

namespace {

// Weighted graph for one aggregation level. Neighbour lists exclude the
// node itself; self_weight holds the internal weight counted in both directions.
struct LevelGraph {
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> targets;
  std::vector<double> weights;
  std::vector<double> self_weight;
  std::vector<double> strength;
  double total = 0.0;  // 2m

  std::size_t size() const { return self_weight.size(); }
};

LevelGraph level_from_snapshot(const GraphSnapshot& g, const std::vector<NodeId>& nodes,
                               const std::vector<std::uint32_t>& local_of) {
  LevelGraph lg;
  lg.offsets.push_back(0);
  lg.self_weight.assign(nodes.size(), 0.0);
  lg.strength.assign(nodes.size(), 0.0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto nb = g.neighbors(nodes[i]);
    auto w = g.weights(nodes[i]);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      lg.targets.push_back(local_of[nb[k]]);
      lg.weights.push_back(static_cast<double>(w[k]));
      lg.strength[i] += static_cast<double>(w[k]);
    }
    lg.offsets.push_back(lg.targets.size());
    lg.total += lg.strength[i];
  }
  return lg;
}

LevelGraph aggregate(const LevelGraph& lg, const std::vector<std::uint32_t>& comm, std::size_t ncomm) {
  LevelGraph out;
  out.self_weight.assign(ncomm, 0.0);
  out.strength.assign(ncomm, 0.0);
  std::vector<std::vector<std::pair<std::uint32_t, double>>> links(ncomm);
  for (std::size_t i = 0; i < lg.size(); ++i) {
    auto ci = comm[i];
    out.self_weight[ci] += lg.self_weight[i];
    out.strength[ci] += lg.strength[i];
    for (auto k = lg.offsets[i]; k < lg.offsets[i + 1]; ++k) {
      auto cj = comm[lg.targets[k]];
      if (ci == cj) out.self_weight[ci] += lg.weights[k];
      else links[ci].emplace_back(cj, lg.weights[k]);
    }
  }
  out.offsets.push_back(0);
  for (std::size_t c = 0; c < ncomm; ++c) {
    auto& l = links[c];
    std::sort(l.begin(), l.end());
    for (std::size_t k = 0; k < l.size();) {
      auto target = l[k].first;
      double w = 0.0;
      for (; k < l.size() && l[k].first == target; ++k) w += l[k].second;
      out.targets.push_back(target);
      out.weights.push_back(w);
    }
    out.offsets.push_back(out.targets.size());
  }
  out.total = lg.total;
  return out;
}

double level_quality(const std::vector<double>& in, const std::vector<double>& tot, double total, double gamma) {
  double q = 0.0;
  for (std::size_t c = 0; c < in.size(); ++c) {
    if (tot[c] == 0.0 && in[c] == 0.0) continue;
    q += in[c] / total - gamma * (tot[c] / total) * (tot[c] / total);
  }
  return q;
}

// Local moving phase. Returns true when any node changed community.
bool local_moves(const LevelGraph& lg, std::vector<std::uint32_t>& comm, const LouvainOptions& opt, Rng& rng) {
  const std::size_t n = lg.size();
  const double m2 = lg.total;
  std::vector<double> in(n, 0.0), tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    comm[i] = static_cast<std::uint32_t>(i);
    in[i] = lg.self_weight[i];
    tot[i] = lg.strength[i];
  }
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);

  std::vector<double> link_weight(n, 0.0);
  std::vector<char> seen(n, 0);
  std::vector<std::uint32_t> touched;
  bool moved_any = false;
  double q = level_quality(in, tot, m2, opt.resolution);

  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    rng.shuffle(std::span<std::uint32_t>(order));
    bool moved = false;
    for (auto i : order) {
      const auto home = comm[i];
      const double ki = lg.strength[i];
      touched.clear();
      touched.push_back(home);
      seen[home] = 1;
      for (auto k = lg.offsets[i]; k < lg.offsets[i + 1]; ++k) {
        auto c = comm[lg.targets[k]];
        if (!seen[c]) {
          seen[c] = 1;
          touched.push_back(c);
        }
        link_weight[c] += lg.weights[k];
      }
      // Take i out of its community.
      tot[home] -= ki;
      in[home] -= 2.0 * link_weight[home] + lg.self_weight[i];

      std::uint32_t best = home;
      double best_gain = link_weight[home] - opt.resolution * tot[home] * ki / m2;
      for (auto c : touched) {
        double gain = link_weight[c] - opt.resolution * tot[c] * ki / m2;
        if (gain > best_gain || (gain == best_gain && c < best)) {
          best = c;
          best_gain = gain;
        }
      }
      tot[best] += ki;
      in[best] += 2.0 * link_weight[best] + lg.self_weight[i];
      if (best != home) {
        comm[i] = best;
        moved = true;
      }
      for (auto c : touched) {
        link_weight[c] = 0.0;
        seen[c] = 0;
      }
    }
    double q_next = level_quality(in, tot, m2, opt.resolution);
    moved_any = moved_any || moved;
    if (!moved || q_next - q < opt.tolerance) break;
    q = q_next;
  }
  return moved_any;
}

// Relabels to 0..k-1 in order of first appearance; returns k.
std::size_t renumber(std::vector<std::uint32_t>& comm) {
  std::vector<std::uint32_t> label(comm.size(), UINT32_MAX);
  std::uint32_t next = 0;
  for (auto& c : comm) {
    if (label[c] == UINT32_MAX) label[c] = next++;
    c = label[c];
  }
  return next;
}

}  // namespace

double modularity(const GraphSnapshot& graph, std::span<const CommunityId> community_of, double resolution) {
  if (community_of.size() < graph.id_space()) throw InvalidArgument("assignment does not cover the id space");
  const double m2 = 2.0 * static_cast<double>(graph.total_weight());
  if (m2 == 0.0) throw InvalidArgument("modularity is undefined on a graph without edges");
  CommunityId max_id = -1;
  for (NodeId u = 0; u < graph.id_space(); ++u) {
    if (graph.degree(u) == 0) continue;
    if (community_of[u] < 0) throw InvalidArgument("node " + std::to_string(u) + " has no community");
    max_id = std::max(max_id, community_of[u]);
  }
  std::vector<double> in(static_cast<std::size_t>(max_id) + 1, 0.0), tot(in.size(), 0.0);
  for (NodeId u = 0; u < graph.id_space(); ++u) {
    if (graph.degree(u) == 0) continue;
    auto cu = static_cast<std::size_t>(community_of[u]);
    auto nb = graph.neighbors(u);
    auto w = graph.weights(u);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      tot[cu] += static_cast<double>(w[k]);
      if (community_of[nb[k]] == community_of[u]) in[cu] += static_cast<double>(w[k]);
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < in.size(); ++c) q += in[c] / m2 - resolution * (tot[c] / m2) * (tot[c] / m2);
  return q;
}

CommunityAssignment louvain(const GraphSnapshot& graph, const LouvainOptions& options) {
  if (graph.edge_count() == 0) throw InvalidArgument("louvain needs a graph with at least one edge");
  auto nodes = graph.active_nodes();
  std::vector<std::uint32_t> local_of(graph.id_space(), UINT32_MAX);
  for (std::size_t i = 0; i < nodes.size(); ++i) local_of[nodes[i]] = static_cast<std::uint32_t>(i);

  CommunityAssignment result;
  result.community_of.assign(graph.id_space(), kUnassigned);
  // membership[i] = current super-node of active node i
  std::vector<std::uint32_t> membership(nodes.size());
  std::iota(membership.begin(), membership.end(), 0u);

  auto project = [&](const std::vector<std::uint32_t>& member) {
    for (std::size_t i = 0; i < nodes.size(); ++i) result.community_of[nodes[i]] = static_cast<CommunityId>(member[i]);
  };
  project(membership);
  double q = modularity(graph, result.community_of, options.resolution);
  result.level_modularity.push_back(q);

  Rng rng(options.seed);
  LevelGraph level = level_from_snapshot(graph, nodes, local_of);
  for (int lvl = 0; lvl < options.max_levels; ++lvl) {
    std::vector<std::uint32_t> comm(level.size());
    bool moved = local_moves(level, comm, options, rng);
    std::size_t ncomm = renumber(comm);
    if (!moved) break;

    std::vector<std::uint32_t> next(membership.size());
    for (std::size_t i = 0; i < membership.size(); ++i) next[i] = comm[membership[i]];
    project(next);
    double q_next = modularity(graph, result.community_of, options.resolution);
    if (q_next - q < options.tolerance) {
      // The level did not pay off; keep the previous partition.
      project(membership);
      break;
    }
    membership = std::move(next);
    q = q_next;
    result.level_modularity.push_back(q);
    level = aggregate(level, comm, ncomm);
  }

  // Final ids in order of the smallest member node.
  renumber(membership);
  project(membership);
  std::size_t ncomm = 0;
  for (auto c : membership) ncomm = std::max<std::size_t>(ncomm, c + 1);
  result.sizes.assign(ncomm, 0);
  for (auto c : membership) ++result.sizes[c];
  result.modularity = modularity(graph, result.community_of, options.resolution);
  return result;
}

TopCommunities select_top_community(const CommunityAssignment& assignment, std::size_t k) {
  if (k < 1) throw InvalidArgument("k must be at least 1");
  const std::size_t ncomm = assignment.community_count();
  std::vector<std::vector<NodeId>> members(ncomm);
  for (NodeId u = 0; u < assignment.community_of.size(); ++u) {
    auto c = assignment.community_of[u];
    if (c >= 0) members[static_cast<std::size_t>(c)].push_back(u);
  }
  std::vector<CommunityId> order;
  for (std::size_t c = 0; c < ncomm; ++c)
    if (!members[c].empty()) order.push_back(static_cast<CommunityId>(c));
  std::sort(order.begin(), order.end(), [&](CommunityId a, CommunityId b) {
    const auto& ma = members[static_cast<std::size_t>(a)];
    const auto& mb = members[static_cast<std::size_t>(b)];
    if (ma.size() != mb.size()) return ma.size() > mb.size();
    return ma.front() < mb.front();
  });
  TopCommunities out;
  out.truncated = k > order.size();
  for (std::size_t i = 0; i < std::min(k, order.size()); ++i) {
    out.ids.push_back(order[i]);
    out.members.push_back(std::move(members[static_cast<std::size_t>(order[i])]));
  }
  return out;
}

PairCommunity label_pair_community(const CommunityAssignment& assignment, NodeId u, NodeId v) {
  auto get = [&](NodeId n) {
    if (n >= assignment.community_of.size() || assignment.community_of[n] < 0)
      throw InvalidArgument("node " + std::to_string(n) + " has no community");
    return assignment.community_of[n];
  };
  return get(u) == get(v) ? PairCommunity::Intra : PairCommunity::Cross;
}

double intra_rate(const CommunityAssignment& assignment, std::span<const std::pair<NodeId, NodeId>> pairs) {
  if (pairs.empty()) throw InvalidArgument("no pairs to label");
  std::size_t intra = 0;
  for (auto [u, v] : pairs)
    if (label_pair_community(assignment, u, v) == PairCommunity::Intra) ++intra;
  return static_cast<double>(intra) / static_cast<double>(pairs.size());
}

}  // namespace coauthlp
