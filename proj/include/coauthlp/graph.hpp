#pragma once

// Temporal co-authorship edges and immutable windowed graph snapshots.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace coauthlp {

using NodeId = std::uint32_t;
using Weight = std::uint64_t;

/// Inclusive calendar-year range.
struct YearRange {
  int first = 0;
  int last = -1;

  bool empty() const noexcept { return last < first; }
  bool contains(int year) const noexcept { return year >= first && year <= last; }
  bool overlaps(const YearRange& o) const noexcept { return !(o.last < first || last < o.first); }
  bool operator==(const YearRange&) const = default;
};

std::string to_string(const YearRange& r);

/// Bijection between opaque author ids and dense indices 0..size()-1,
/// assigned in first-seen order.
class AuthorIndex {
 public:
  NodeId intern(std::string_view id);
  std::optional<NodeId> find(std::string_view id) const;
  const std::string& id_of(NodeId n) const { return ids_.at(n); }
  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, NodeId> index_;
};

/// Canonical undirected edge: u < v under dense-index order, weight >= 1.
struct TemporalEdge {
  NodeId u = 0;
  NodeId v = 0;
  int year = 0;
  Weight weight = 1;

  bool operator==(const TemporalEdge&) const = default;
};

/// Ingested edge stream. Edges keep first-occurrence order of their
/// (u, v, year) key, which makes an exported file re-ingest to identical ids.
struct EdgeList {
  AuthorIndex authors;
  std::vector<TemporalEdge> edges;

  std::optional<YearRange> year_span() const;
};

struct IngestReport {
  std::size_t rows_read = 0;
  std::size_t rows_accepted = 0;
  std::size_t self_loops = 0;
  std::size_t out_of_range = 0;
  std::size_t duplicates_merged = 0;
};

struct IngestResult {
  EdgeList data;
  IngestReport report;
};

/// Reads `src,dst,year[,weight]` CSV. Lines starting with '#' are skipped.
/// Throws ParseError (with line number) on malformed rows.
IngestResult ingest_edges(std::istream& in, std::optional<YearRange> years = std::nullopt);
IngestResult ingest_edges(const std::filesystem::path& path, std::optional<YearRange> years = std::nullopt);

/// Writes the canonical edge file; re-ingesting it reproduces `edges`.
void export_edges_csv(const EdgeList& edges, std::ostream& out);

/// Immutable CSR adjacency of the edges falling inside a set of year windows.
/// The index space is the ingest id space; nodes without edges in the window
/// have degree 0 and are not counted in node_count().
class GraphSnapshot {
 public:
  GraphSnapshot() = default;

  std::size_t id_space() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }
  Weight total_weight() const noexcept { return total_weight_; }
  const std::vector<YearRange>& windows() const noexcept { return windows_; }

  bool contains(NodeId u) const noexcept { return u < id_space(); }
  bool active(NodeId u) const noexcept { return contains(u) && degree(u) > 0; }

  std::span<const NodeId> neighbors(NodeId u) const noexcept {
    return {neighbors_.data() + offsets_[u], neighbors_.data() + offsets_[u + 1]};
  }
  std::span<const Weight> weights(NodeId u) const noexcept {
    return {weights_.data() + offsets_[u], weights_.data() + offsets_[u + 1]};
  }
  std::size_t degree(NodeId u) const noexcept { return offsets_[u + 1] - offsets_[u]; }
  /// Sum of incident edge weights.
  Weight strength(NodeId u) const noexcept;

  bool has_edge(NodeId u, NodeId v) const noexcept;
  std::optional<Weight> edge_weight(NodeId u, NodeId v) const noexcept;

  /// Active nodes in ascending order.
  std::vector<NodeId> active_nodes() const;

  /// Calls f(u, v, weight) once per undirected edge with u < v, in (u, v) order.
  template <class F>
  void for_each_edge(F&& f) const {
    for (NodeId u = 0; u < id_space(); ++u) {
      auto nb = neighbors(u);
      auto w = weights(u);
      for (std::size_t i = 0; i < nb.size(); ++i)
        if (u < nb[i]) f(u, nb[i], w[i]);
    }
  }

  /// Throws InvalidArgument when u is outside the id space.
  void require(NodeId u) const;

  void write_binary(std::ostream& out) const;
  static GraphSnapshot read_binary(std::istream& in);
  /// `u,v,weight` rows with string author ids, u < v.
  void write_csv(std::ostream& out, const AuthorIndex& authors) const;

  /// Builds from explicit undirected pairs (aggregating duplicates). Used by
  /// tests and generators; self-loops are rejected.
  static GraphSnapshot from_pairs(std::size_t id_space, std::span<const std::pair<NodeId, NodeId>> pairs);

  bool operator==(const GraphSnapshot&) const = default;

 private:
  friend GraphSnapshot build_snapshot(const EdgeList&, std::span<const YearRange>);
  static GraphSnapshot from_weighted(std::size_t id_space, std::vector<TemporalEdge> edges,
                                     std::vector<YearRange> windows);

  std::vector<YearRange> windows_;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> neighbors_;
  std::vector<Weight> weights_;
  std::size_t node_count_ = 0;
  Weight total_weight_ = 0;
};

/// Aggregates every edge whose year lies in any of `windows`; the same pair
/// across years sums its weights. Windows must be non-empty.
GraphSnapshot build_snapshot(const EdgeList& edges, std::span<const YearRange> windows);
GraphSnapshot build_snapshot(const EdgeList& edges, YearRange window);

/// Packs an unordered pair into a 64-bit key with the smaller id high.
inline std::uint64_t pair_key(NodeId a, NodeId b) noexcept {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}
inline std::pair<NodeId, NodeId> unpack_pair(std::uint64_t key) noexcept {
  return {static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffu)};
}

}  // namespace coauthlp
