#pragma once

// Era train/eval windows, per-window growth statistics and edge classes.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coauthlp/graph.hpp"

namespace coauthlp {

struct EraConfig {
  std::string name;
  std::vector<YearRange> train_windows;
  YearRange eval_window;

  /// Throws InvalidArgument when windows overlap or eval does not follow train.
  void validate() const;
};

/// The three eras used for the OpenAlex AI co-authorship network.
std::vector<EraConfig> default_eras();

/// Consecutive two-year windows covering [first, last].
std::vector<YearRange> two_year_windows(int first, int last);

enum class EdgeClass : std::uint8_t { Continued, New, Dropped };

const char* to_string(EdgeClass c) noexcept;

struct ClassifiedEdge {
  NodeId u;
  NodeId v;
  EdgeClass cls;
};

struct EdgeClassification {
  std::vector<ClassifiedEdge> edges;  // sorted by (u, v)
  std::size_t continued = 0;
  std::size_t added = 0;  // New
  std::size_t dropped = 0;

  std::vector<std::pair<NodeId, NodeId>> pairs_of(EdgeClass c) const;
};

/// Presence/absence classification over train ∪ eval.
EdgeClassification classify_edges(const GraphSnapshot& train, const GraphSnapshot& eval);

struct WindowStats {
  YearRange window;
  std::uint64_t authors = 0;
  std::uint64_t edges = 0;
  double avg_degree = 0.0;
  std::optional<double> edge_growth;    // vs previous window
  std::optional<double> author_growth;  // vs previous window
  double edges_per_author = 0.0;
};

/// Derives the ratio columns from raw per-window author and edge counts.
std::vector<WindowStats> stats_from_counts(const std::vector<YearRange>& windows,
                                           const std::vector<std::uint64_t>& authors,
                                           const std::vector<std::uint64_t>& edges);

/// Windows must be ordered and non-overlapping.
std::vector<WindowStats> window_stats(const EdgeList& edges, const std::vector<YearRange>& windows);

enum class BoundaryKind : std::uint8_t { Spike, Deceleration };

struct Boundary {
  std::size_t before_window;  // index of the first window of the new regime
  BoundaryKind kind;
  double edge_growth;
  double author_growth;
};

struct BoundaryThresholds {
  double spike = 2.0;
  double decel = 1.0;
};

/// Flags a boundary before window i when its edge growth reaches `spike`, or
/// drops to `decel` or below while author growth exceeds edge growth.
std::vector<Boundary> detect_boundaries(const std::vector<WindowStats>& stats, BoundaryThresholds t = {});

}  // namespace coauthlp
