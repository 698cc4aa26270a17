#pragma once

// Neighbourhood link-prediction scores over an unweighted view of a
// snapshot, plus the edge-weight persistence and random baselines.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coauthlp/candidates.hpp"
#include "coauthlp/graph.hpp"

namespace coauthlp {

enum class Heuristic : std::uint8_t { CN, JC, AA, PA, RA, EdgeWeight, Random };

const char* to_string(Heuristic h) noexcept;
std::optional<Heuristic> parse_heuristic(std::string_view name) noexcept;
/// CN, JC, AA, PA, RA.
std::vector<Heuristic> topology_heuristics();

// Each throws InvalidArgument for nodes outside the snapshot's id space.
double common_neighbors(const GraphSnapshot& g, NodeId u, NodeId v);
double jaccard(const GraphSnapshot& g, NodeId u, NodeId v);
/// Sum of 1/ln(deg(w)) over common neighbours w.
double adamic_adar(const GraphSnapshot& g, NodeId u, NodeId v);
double resource_allocation(const GraphSnapshot& g, NodeId u, NodeId v);
double preferential_attachment(const GraphSnapshot& g, NodeId u, NodeId v);
/// Aggregated co-authorship weight; throws InvalidArgument when (u, v) is not an edge.
double edge_weight_score(const GraphSnapshot& g, NodeId u, NodeId v);

/// Deterministic [0, 1) draw for the pair at `index` of a batch.
double random_score(std::uint64_t seed, std::size_t index) noexcept;

double score(const GraphSnapshot& g, Heuristic h, NodeId u, NodeId v, std::uint64_t seed = 0, std::size_t index = 0);

struct HeuristicScore {
  NodeId u;
  NodeId v;
  Heuristic method;
  double value;
};

/// One score per (pair, method), pair-major. Random values depend only on
/// (seed, pair index), so output is identical for any worker count.
std::vector<HeuristicScore> score_batch(const GraphSnapshot& g, std::span<const NodePair> pairs,
                                        std::span<const Heuristic> methods, std::uint64_t seed,
                                        unsigned workers = 1);

}  // namespace coauthlp
