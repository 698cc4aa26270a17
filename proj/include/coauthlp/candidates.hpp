#pragma once

// 2-hop candidate generation, the recall ceiling it implies, and the
// cold-start profile of new edges that fall outside it.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "coauthlp/community.hpp"
#include "coauthlp/graph.hpp"

namespace coauthlp {

using NodePair = std::pair<NodeId, NodeId>;

/// Membership mask over a snapshot's id space.
class NodeScope {
 public:
  NodeScope() = default;
  NodeScope(std::size_t id_space, std::span<const NodeId> members);
  /// Every active node of the snapshot.
  static NodeScope all(const GraphSnapshot& g);

  bool contains(NodeId u) const noexcept { return u < mask_.size() && mask_[u]; }
  const std::vector<NodeId>& members() const noexcept { return members_; }

 private:
  std::vector<char> mask_;
  std::vector<NodeId> members_;  // ascending
};

struct CandidatePair {
  NodeId u = 0;  // u < v
  NodeId v = 0;
  std::uint32_t common_neighbors = 0;
  bool positive = false;
};

using CandidateVisitor = std::function<void(NodeId u, NodeId v, std::uint32_t common_neighbors)>;

/// Streams every unordered non-adjacent pair inside `scope` sharing at least
/// one training neighbour, exactly once, in ascending (u, v) order. Work is
/// split over blocks of source nodes; the visitor is always called from one
/// thread at a time and in canonical order regardless of `workers`.
void for_each_candidate(const GraphSnapshot& train, const NodeScope& scope, const CandidateVisitor& visit,
                        unsigned workers = 1);

/// Materialising convenience wrapper; labels pairs found in `positives`.
std::vector<CandidatePair> generate_candidates(const GraphSnapshot& train, const NodeScope& scope,
                                               const std::unordered_set<std::uint64_t>& positives = {},
                                               unsigned workers = 1);

bool shares_neighbor(const GraphSnapshot& g, NodeId u, NodeId v) noexcept;

/// Fraction of new edges whose endpoints share a training neighbour.
/// Throws InvalidArgument on an empty edge set.
double recall_ceiling(const GraphSnapshot& train, std::span<const NodePair> new_edges);

struct ColdStartPartition {
  std::vector<NodePair> two_hop;
  std::vector<NodePair> cold;
};

ColdStartPartition partition_cold_start(const GraphSnapshot& train, std::span<const NodePair> new_edges);

struct DegreeBin {
  std::size_t lo;
  std::size_t hi;  // inclusive; SIZE_MAX for open-ended
  std::string label() const;
};

/// [1], [2,3], [4,7], ..., [1024, inf).
std::vector<DegreeBin> default_degree_bins();
std::vector<std::size_t> default_top_k();

struct BinRate {
  DegreeBin bin;
  std::size_t total = 0;
  std::size_t cold = 0;
  std::optional<double> rate;
};

struct TopKRow {
  std::size_t k = 0;
  std::size_t new_edges = 0;
  std::size_t cold_count = 0;
  std::optional<double> cold_rate;
};

inline constexpr int kUnreachable = -1;

struct ColdStartStats {
  std::size_t new_edges = 0;
  std::size_t two_hop = 0;
  std::size_t cold = 0;
  double ceiling = 0.0;
  std::vector<BinRate> cold_rate_by_degree_bin;
  std::size_t unbinned = 0;  // new edges whose min endpoint degree fits no bin
  std::vector<TopKRow> top_k_sweep;
  /// Shortest-path distance histogram of cold pairs; kUnreachable keys the
  /// disconnected bucket.
  std::map<int, std::size_t> path_length_histogram;
  std::optional<double> median_cold_distance;  // over reachable cold pairs
  std::optional<double> cross_community_rate_cold;
  std::optional<double> cross_community_rate_two_hop;
};

/// Nodes without a community count as cross-community.
ColdStartStats cold_start_profile(const GraphSnapshot& train, std::span<const NodePair> new_edges,
                                  std::span<const DegreeBin> degree_bins, std::span<const std::size_t> top_k,
                                  const CommunityAssignment& assignment);

/// BFS hop distance, kUnreachable when disconnected.
int shortest_path_length(const GraphSnapshot& g, NodeId source, NodeId target);

/// Authors ranked by training degree (descending, ties by id).
std::vector<NodeId> top_degree_nodes(const GraphSnapshot& g, std::size_t k);

/// Uniform draw of non-adjacent pairs with no common neighbour among `pool`,
/// used as negatives for the cold-start evaluation.
std::vector<NodePair> sample_cold_negatives(const GraphSnapshot& train, std::span<const NodeId> pool,
                                            std::size_t count, std::uint64_t seed,
                                            const std::unordered_set<std::uint64_t>& exclude = {});

}  // namespace coauthlp
