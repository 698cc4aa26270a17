#pragma once

// Louvain modularity optimisation on a training snapshot and helpers for
// picking the evaluation community and labelling pairs.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coauthlp/graph.hpp"

namespace coauthlp {

using CommunityId = std::int32_t;
inline constexpr CommunityId kUnassigned = -1;

struct CommunityAssignment {
  /// Indexed by node id over the snapshot id space; kUnassigned for nodes
  /// without edges in the snapshot.
  std::vector<CommunityId> community_of;
  /// Community sizes indexed by community id.
  std::vector<std::size_t> sizes;
  double modularity = 0.0;
  /// Modularity after each aggregation level, starting from the singleton partition.
  std::vector<double> level_modularity;

  std::size_t community_count() const noexcept { return sizes.size(); }
};

struct LouvainOptions {
  std::uint64_t seed = 0;
  double resolution = 1.0;
  double tolerance = 1e-7;
  int max_levels = 64;
  int max_sweeps = 1000;
};

/// Throws InvalidArgument when the graph has no edges.
CommunityAssignment louvain(const GraphSnapshot& graph, const LouvainOptions& options = {});

/// Weighted modularity with resolution; every active node must be assigned.
double modularity(const GraphSnapshot& graph, std::span<const CommunityId> community_of, double resolution = 1.0);

struct TopCommunities {
  std::vector<CommunityId> ids;
  std::vector<std::vector<NodeId>> members;  // ascending node ids
  bool truncated = false;                    // fewer communities than requested
};

/// Largest k communities; ties go to the community holding the smaller node id.
TopCommunities select_top_community(const CommunityAssignment& assignment, std::size_t k);

enum class PairCommunity : std::uint8_t { Intra, Cross };

PairCommunity label_pair_community(const CommunityAssignment& assignment, NodeId u, NodeId v);

/// Fraction of pairs whose endpoints share a community.
double intra_rate(const CommunityAssignment& assignment, std::span<const std::pair<NodeId, NodeId>> pairs);

}  // namespace coauthlp
