#include "coauthlp/candidates.hpp"

#include <algorithm>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <numeric>

#include "coauthlp/error.hpp"
#include "coauthlp/parallel.hpp"
#include "coauthlp/rng.hpp"

namespace coauthlp {

NodeScope::NodeScope(std::size_t id_space, std::span<const NodeId> members) : mask_(id_space, 0) {
  for (auto u : members) {
    if (u >= id_space) throw InvalidArgument("scope node outside the id space");
    mask_[u] = 1;
  }
  for (NodeId u = 0; u < id_space; ++u)
    if (mask_[u]) members_.push_back(u);
}

NodeScope NodeScope::all(const GraphSnapshot& g) {
  auto nodes = g.active_nodes();
  return NodeScope(g.id_space(), nodes);
}

namespace {

// Per-thread scratch space for counting common neighbours of one source.
struct CandidateScratch {
  std::vector<std::uint32_t> count;
  std::vector<NodeId> adjacent_stamp;  // u + 1 when x is adjacent to u
  std::vector<NodeId> touched;

  explicit CandidateScratch(std::size_t n) : count(n, 0), adjacent_stamp(n, 0) {}

  template <class Emit>
  void run(const GraphSnapshot& g, const NodeScope& scope, NodeId u, Emit&& emit) {
    touched.clear();
    for (auto w : g.neighbors(u)) adjacent_stamp[w] = u + 1;
    for (auto w : g.neighbors(u)) {
      auto second = g.neighbors(w);
      // Only x > u: the owner of a pair is its smaller endpoint.
      for (auto it = std::upper_bound(second.begin(), second.end(), u); it != second.end(); ++it) {
        NodeId x = *it;
        if (!scope.contains(x)) continue;
        if (count[x]++ == 0) touched.push_back(x);
      }
    }
    std::sort(touched.begin(), touched.end());
    for (auto x : touched) {
      if (adjacent_stamp[x] != u + 1) emit(u, x, count[x]);
      count[x] = 0;
    }
  }
};

}  // namespace

void for_each_candidate(const GraphSnapshot& train, const NodeScope& scope, const CandidateVisitor& visit,
                        unsigned workers) {
  const auto& sources = scope.members();
  for (auto u : sources) train.require(u);
  workers = resolve_workers(workers);
  if (workers <= 1) {
    CandidateScratch scratch(train.id_space());
    for (auto u : sources) scratch.run(train, scope, u, visit);
    return;
  }

  constexpr std::size_t kBlock = 64;
  const std::size_t nblocks = (sources.size() + kBlock - 1) / kBlock;
  std::mutex mu;
  std::condition_variable turn;
  std::size_t next_commit = 0;
  bool failed = false;

  struct Triple {
    NodeId u, v;
    std::uint32_t cn;
  };
  std::atomic<std::size_t> next_block{0};
  // One worker per scratch buffer; blocks are claimed in increasing order so
  // the ordered commit below always makes progress.
  parallel_for(workers, workers, [&](std::size_t) {
    CandidateScratch scratch(train.id_space());
    std::vector<Triple> buffer;
    for (auto b = next_block.fetch_add(1); b < nblocks; b = next_block.fetch_add(1)) {
      buffer.clear();
      auto begin = b * kBlock;
      auto end = std::min(sources.size(), begin + kBlock);
      for (auto i = begin; i < end; ++i)
        scratch.run(train, scope, sources[i], [&](NodeId u, NodeId v, std::uint32_t cn) { buffer.push_back({u, v, cn}); });
      std::unique_lock lock(mu);
      turn.wait(lock, [&] { return next_commit == b || failed; });
      if (failed) return;
      try {
        for (const auto& t : buffer) visit(t.u, t.v, t.cn);
      } catch (...) {
        failed = true;
        lock.unlock();
        turn.notify_all();
        throw;
      }
      ++next_commit;
      lock.unlock();
      turn.notify_all();
    }
  });
}

std::vector<CandidatePair> generate_candidates(const GraphSnapshot& train, const NodeScope& scope,
                                               const std::unordered_set<std::uint64_t>& positives,
                                               unsigned workers) {
  std::vector<CandidatePair> out;
  for_each_candidate(
      train, scope,
      [&](NodeId u, NodeId v, std::uint32_t cn) {
        out.push_back({u, v, cn, positives.count(pair_key(u, v)) > 0});
      },
      workers);
  return out;
}

bool shares_neighbor(const GraphSnapshot& g, NodeId u, NodeId v) noexcept {
  if (!g.contains(u) || !g.contains(v)) return false;
  auto a = g.neighbors(u);
  auto b = g.neighbors(v);
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) ++ia;
    else if (*ib < *ia) ++ib;
    else return true;
  }
  return false;
}

double recall_ceiling(const GraphSnapshot& train, std::span<const NodePair> new_edges) {
  if (new_edges.empty()) throw InvalidArgument("no new edges");
  std::size_t reachable = 0;
  for (auto [u, v] : new_edges)
    if (shares_neighbor(train, u, v)) ++reachable;
  return static_cast<double>(reachable) / static_cast<double>(new_edges.size());
}

ColdStartPartition partition_cold_start(const GraphSnapshot& train, std::span<const NodePair> new_edges) {
  ColdStartPartition out;
  for (const auto& e : new_edges) (shares_neighbor(train, e.first, e.second) ? out.two_hop : out.cold).push_back(e);
  return out;
}

std::string DegreeBin::label() const {
  if (hi == SIZE_MAX) return std::to_string(lo) + "+";
  if (lo == hi) return std::to_string(lo);
  return std::to_string(lo) + "-" + std::to_string(hi);
}

std::vector<DegreeBin> default_degree_bins() {
  std::vector<DegreeBin> bins;
  for (std::size_t lo = 1; lo < 1024; lo *= 2) bins.push_back({lo, lo * 2 - 1});
  bins.push_back({1024, SIZE_MAX});
  return bins;
}

std::vector<std::size_t> default_top_k() { return {100, 1000, 10000}; }

int shortest_path_length(const GraphSnapshot& g, NodeId source, NodeId target) {
  g.require(source);
  g.require(target);
  if (source == target) return 0;
  std::vector<int> dist(g.id_space(), -1);
  std::deque<NodeId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    auto x = queue.front();
    queue.pop_front();
    for (auto y : g.neighbors(x)) {
      if (dist[y] >= 0) continue;
      dist[y] = dist[x] + 1;
      if (y == target) return dist[y];
      queue.push_back(y);
    }
  }
  return kUnreachable;
}

std::vector<NodeId> top_degree_nodes(const GraphSnapshot& g, std::size_t k) {
  auto nodes = g.active_nodes();
  std::stable_sort(nodes.begin(), nodes.end(), [&](NodeId a, NodeId b) { return g.degree(a) > g.degree(b); });
  if (nodes.size() > k) nodes.resize(k);
  return nodes;
}

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

bool is_cross(const CommunityAssignment& a, NodeId u, NodeId v) {
  auto cu = u < a.community_of.size() ? a.community_of[u] : kUnassigned;
  auto cv = v < a.community_of.size() ? a.community_of[v] : kUnassigned;
  return cu < 0 || cv < 0 || cu != cv;
}

}  // namespace

ColdStartStats cold_start_profile(const GraphSnapshot& train, std::span<const NodePair> new_edges,
                                  std::span<const DegreeBin> degree_bins, std::span<const std::size_t> top_k,
                                  const CommunityAssignment& assignment) {
  ColdStartStats s;
  s.new_edges = new_edges.size();
  std::vector<char> cold(new_edges.size(), 0);
  for (std::size_t i = 0; i < new_edges.size(); ++i) {
    auto [u, v] = new_edges[i];
    train.require(u);
    train.require(v);
    cold[i] = shares_neighbor(train, u, v) ? 0 : 1;
    if (cold[i]) ++s.cold;
    else ++s.two_hop;
  }
  if (s.new_edges > 0) s.ceiling = static_cast<double>(s.two_hop) / static_cast<double>(s.new_edges);

  for (const auto& bin : degree_bins) s.cold_rate_by_degree_bin.push_back({bin, 0, 0, std::nullopt});
  for (std::size_t i = 0; i < new_edges.size(); ++i) {
    auto [u, v] = new_edges[i];
    auto d = std::min(train.degree(u), train.degree(v));
    bool placed = false;
    for (auto& row : s.cold_rate_by_degree_bin) {
      if (d >= row.bin.lo && d <= row.bin.hi) {
        ++row.total;
        if (cold[i]) ++row.cold;
        placed = true;
        break;
      }
    }
    if (!placed) ++s.unbinned;
  }
  for (auto& row : s.cold_rate_by_degree_bin) row.rate = ratio(row.cold, row.total);

  if (!top_k.empty()) {
    auto max_k = *std::max_element(top_k.begin(), top_k.end());
    auto ranked = top_degree_nodes(train, max_k);
    std::vector<std::size_t> rank(train.id_space(), SIZE_MAX);
    for (std::size_t r = 0; r < ranked.size(); ++r) rank[ranked[r]] = r;
    for (auto k : top_k) {
      TopKRow row;
      row.k = k;
      for (std::size_t i = 0; i < new_edges.size(); ++i) {
        auto [u, v] = new_edges[i];
        if (rank[u] < k && rank[v] < k) {
          ++row.new_edges;
          if (cold[i]) ++row.cold_count;
        }
      }
      row.cold_rate = ratio(row.cold_count, row.new_edges);
      s.top_k_sweep.push_back(row);
    }
  }

  // One BFS per distinct cold source.
  std::vector<std::size_t> cold_idx;
  for (std::size_t i = 0; i < new_edges.size(); ++i)
    if (cold[i]) cold_idx.push_back(i);
  std::sort(cold_idx.begin(), cold_idx.end(),
            [&](std::size_t a, std::size_t b) { return new_edges[a].first < new_edges[b].first; });
  std::vector<int> dist(train.id_space(), -1);
  std::vector<NodeId> visited;
  std::vector<int> reachable_distances;
  NodeId current = UINT32_MAX;
  for (auto i : cold_idx) {
    auto [u, v] = new_edges[i];
    if (u != current) {
      for (auto x : visited) dist[x] = -1;
      visited.clear();
      current = u;
      std::deque<NodeId> queue{u};
      dist[u] = 0;
      visited.push_back(u);
      while (!queue.empty()) {
        auto x = queue.front();
        queue.pop_front();
        for (auto y : train.neighbors(x)) {
          if (dist[y] >= 0) continue;
          dist[y] = dist[x] + 1;
          visited.push_back(y);
          queue.push_back(y);
        }
      }
    }
    int d = dist[v] >= 0 ? dist[v] : kUnreachable;
    ++s.path_length_histogram[d];
    if (d != kUnreachable) reachable_distances.push_back(d);
  }
  if (!reachable_distances.empty()) {
    std::sort(reachable_distances.begin(), reachable_distances.end());
    auto n = reachable_distances.size();
    s.median_cold_distance = n % 2 ? reachable_distances[n / 2]
                                   : 0.5 * (reachable_distances[n / 2 - 1] + reachable_distances[n / 2]);
  }

  std::size_t cross_cold = 0, cross_two_hop = 0;
  for (std::size_t i = 0; i < new_edges.size(); ++i) {
    if (!is_cross(assignment, new_edges[i].first, new_edges[i].second)) continue;
    if (cold[i]) ++cross_cold;
    else ++cross_two_hop;
  }
  s.cross_community_rate_cold = ratio(cross_cold, s.cold);
  s.cross_community_rate_two_hop = ratio(cross_two_hop, s.two_hop);
  return s;
}

std::vector<NodePair> sample_cold_negatives(const GraphSnapshot& train, std::span<const NodeId> pool,
                                            std::size_t count, std::uint64_t seed,
                                            const std::unordered_set<std::uint64_t>& exclude) {
  std::vector<NodePair> out;
  if (pool.size() < 2) return out;
  Rng rng(seed);
  std::unordered_set<std::uint64_t> chosen;
  const std::size_t max_attempts = 1000 * std::max<std::size_t>(count, 1);
  for (std::size_t attempt = 0; attempt < max_attempts && out.size() < count; ++attempt) {
    NodeId a = pool[rng.below(pool.size())];
    NodeId b = pool[rng.below(pool.size())];
    if (a == b) continue;
    auto key = pair_key(a, b);
    if (exclude.count(key) || chosen.count(key)) continue;
    if (train.has_edge(a, b) || shares_neighbor(train, a, b)) continue;
    chosen.insert(key);
    out.push_back(unpack_pair(key));
  }
  return out;
}

}  // namespace coauthlp
