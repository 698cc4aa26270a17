#include "coauthlp/graph.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "coauthlp/error.hpp"
#include "coauthlp/text.hpp"

namespace coauthlp {

std::string to_string(const YearRange& r) {
  return std::to_string(r.first) + "-" + std::to_string(r.last);
}

NodeId AuthorIndex::intern(std::string_view id) {
  auto it = index_.find(std::string(id));
  if (it != index_.end()) return it->second;
  auto n = static_cast<NodeId>(ids_.size());
  ids_.emplace_back(id);
  index_.emplace(ids_.back(), n);
  return n;
}

std::optional<NodeId> AuthorIndex::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<YearRange> EdgeList::year_span() const {
  if (edges.empty()) return std::nullopt;
  auto [lo, hi] = std::minmax_element(edges.begin(), edges.end(),
                                      [](const auto& a, const auto& b) { return a.year < b.year; });
  return YearRange{lo->year, hi->year};
}

namespace {

struct EdgeKey {
  std::uint64_t pair;
  int year;
  bool operator==(const EdgeKey&) const = default;
};

struct EdgeKeyHash {
  std::size_t operator()(const EdgeKey& k) const noexcept {
    return std::hash<std::uint64_t>()(k.pair * 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(k.year));
  }
};

}  // namespace

IngestResult ingest_edges(std::istream& in, std::optional<YearRange> years) {
  IngestResult result;
  auto& report = result.report;
  std::unordered_map<EdgeKey, std::size_t, EdgeKeyHash> slot;

  int col_src = -1, col_dst = -1, col_year = -1, col_weight = -1;
  bool have_header = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto fields = split_csv(view);
    if (!have_header) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        auto name = to_lower(trim(fields[i]));
        if (name == "src") col_src = static_cast<int>(i);
        else if (name == "dst") col_dst = static_cast<int>(i);
        else if (name == "year") col_year = static_cast<int>(i);
        else if (name == "weight") col_weight = static_cast<int>(i);
      }
      if (col_src < 0 || col_dst < 0 || col_year < 0)
        throw ParseError("edge file header must contain src,dst,year", lineno);
      have_header = true;
      continue;
    }
    ++report.rows_read;
    auto need = static_cast<std::size_t>(std::max({col_src, col_dst, col_year}));
    if (fields.size() <= need) throw ParseError("edge row has too few columns", lineno);
    std::string_view src = trim(fields[col_src]);
    std::string_view dst = trim(fields[col_dst]);
    if (src.empty() || dst.empty()) throw ParseError("empty author id", lineno);
    auto year = parse_int(fields[col_year]);
    if (!year) throw ParseError("year is not an integer", lineno);
    Weight weight = 1;
    if (col_weight >= 0 && static_cast<std::size_t>(col_weight) < fields.size() &&
        !trim(fields[col_weight]).empty()) {
      auto w = parse_int(fields[col_weight]);
      if (!w || *w < 1) throw ParseError("weight must be a positive integer", lineno);
      weight = static_cast<Weight>(*w);
    }
    if (src == dst) {
      ++report.self_loops;
      continue;
    }
    if (years && !years->contains(static_cast<int>(*year))) {
      ++report.out_of_range;
      continue;
    }
    NodeId a = result.data.authors.intern(src);
    NodeId b = result.data.authors.intern(dst);
    if (a > b) std::swap(a, b);
    EdgeKey key{pair_key(a, b), static_cast<int>(*year)};
    auto [it, fresh] = slot.emplace(key, result.data.edges.size());
    if (fresh) {
      result.data.edges.push_back({a, b, static_cast<int>(*year), weight});
    } else {
      result.data.edges[it->second].weight += weight;
      ++report.duplicates_merged;
    }
    ++report.rows_accepted;
  }
  return result;
}

IngestResult ingest_edges(const std::filesystem::path& path, std::optional<YearRange> years) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open edge file " + path.string());
  return ingest_edges(in, years);
}

void export_edges_csv(const EdgeList& edges, std::ostream& out) {
  out << "src,dst,year,weight\n";
  for (const auto& e : edges.edges) {
    out << csv_field(edges.authors.id_of(e.u)) << ',' << csv_field(edges.authors.id_of(e.v)) << ','
        << e.year << ',' << e.weight << '\n';
  }
}

Weight GraphSnapshot::strength(NodeId u) const noexcept {
  Weight s = 0;
  for (auto w : weights(u)) s += w;
  return s;
}

bool GraphSnapshot::has_edge(NodeId u, NodeId v) const noexcept {
  if (!contains(u) || !contains(v)) return false;
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::optional<Weight> GraphSnapshot::edge_weight(NodeId u, NodeId v) const noexcept {
  if (!contains(u) || !contains(v)) return std::nullopt;
  auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), v);
  if (it == nb.end() || *it != v) return std::nullopt;
  return weights(u)[static_cast<std::size_t>(it - nb.begin())];
}

std::vector<NodeId> GraphSnapshot::active_nodes() const {
  std::vector<NodeId> out;
  out.reserve(node_count_);
  for (NodeId u = 0; u < id_space(); ++u)
    if (degree(u) > 0) out.push_back(u);
  return out;
}

void GraphSnapshot::require(NodeId u) const {
  if (!contains(u)) throw InvalidArgument("unknown node " + std::to_string(u));
}

GraphSnapshot GraphSnapshot::from_weighted(std::size_t id_space, std::vector<TemporalEdge> edges,
                                           std::vector<YearRange> windows) {
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  // Merge the same pair across years.
  std::vector<TemporalEdge> merged;
  merged.reserve(edges.size());
  for (const auto& e : edges) {
    if (!merged.empty() && merged.back().u == e.u && merged.back().v == e.v)
      merged.back().weight += e.weight;
    else
      merged.push_back(e);
  }

  GraphSnapshot g;
  g.windows_ = std::move(windows);
  g.offsets_.assign(id_space + 1, 0);
  for (const auto& e : merged) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < id_space; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.neighbors_.resize(merged.size() * 2);
  g.weights_.resize(merged.size() * 2);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  // Edges are sorted by (u, v), so every list first receives its smaller
  // neighbours (as v, in increasing u) and then its larger ones (as u).
  for (const auto& e : merged) {
    g.neighbors_[cursor[e.u]] = e.v;
    g.weights_[cursor[e.u]++] = e.weight;
    g.neighbors_[cursor[e.v]] = e.u;
    g.weights_[cursor[e.v]++] = e.weight;
    g.total_weight_ += e.weight;
  }
  for (std::size_t u = 0; u < id_space; ++u)
    if (g.offsets_[u + 1] > g.offsets_[u]) ++g.node_count_;
  return g;
}

GraphSnapshot GraphSnapshot::from_pairs(std::size_t id_space, std::span<const std::pair<NodeId, NodeId>> pairs) {
  std::vector<TemporalEdge> edges;
  edges.reserve(pairs.size());
  for (auto [a, b] : pairs) {
    if (a == b) throw InvalidArgument("self-loop " + std::to_string(a));
    if (a >= id_space || b >= id_space) throw InvalidArgument("pair endpoint outside id space");
    if (a > b) std::swap(a, b);
    edges.push_back({a, b, 0, 1});
  }
  return from_weighted(id_space, std::move(edges), {});
}

GraphSnapshot build_snapshot(const EdgeList& edges, std::span<const YearRange> windows) {
  if (windows.empty()) throw InvalidArgument("snapshot needs at least one window");
  for (const auto& w : windows)
    if (w.empty()) throw InvalidArgument("empty window " + to_string(w));
  std::vector<TemporalEdge> selected;
  for (const auto& e : edges.edges) {
    for (const auto& w : windows) {
      if (w.contains(e.year)) {
        selected.push_back(e);
        break;
      }
    }
  }
  return GraphSnapshot::from_weighted(edges.authors.size(), std::move(selected),
                                      std::vector<YearRange>(windows.begin(), windows.end()));
}

GraphSnapshot build_snapshot(const EdgeList& edges, YearRange window) {
  return build_snapshot(edges, std::span<const YearRange>(&window, 1));
}

namespace {

constexpr char kSnapshotMagic[8] = {'C', 'L', 'P', 'S', 'N', 'A', 'P', '1'};

template <class T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw ParseError("truncated snapshot file");
  return v;
}

}  // namespace

void GraphSnapshot::write_binary(std::ostream& out) const {
  out.write(kSnapshotMagic, sizeof kSnapshotMagic);
  put<std::uint64_t>(out, windows_.size());
  for (const auto& w : windows_) {
    put<std::int32_t>(out, w.first);
    put<std::int32_t>(out, w.last);
  }
  put<std::uint64_t>(out, id_space());
  put<std::uint64_t>(out, neighbors_.size());
  for (auto o : offsets_) put<std::uint64_t>(out, o);
  out.write(reinterpret_cast<const char*>(neighbors_.data()),
            static_cast<std::streamsize>(neighbors_.size() * sizeof(NodeId)));
  out.write(reinterpret_cast<const char*>(weights_.data()),
            static_cast<std::streamsize>(weights_.size() * sizeof(Weight)));
}

GraphSnapshot GraphSnapshot::read_binary(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kSnapshotMagic, sizeof magic) != 0) throw ParseError("not a snapshot file");
  GraphSnapshot g;
  auto nwin = get<std::uint64_t>(in);
  for (std::uint64_t i = 0; i < nwin; ++i) {
    int a = get<std::int32_t>(in);
    int b = get<std::int32_t>(in);
    g.windows_.push_back({a, b});
  }
  auto n = get<std::uint64_t>(in);
  auto len = get<std::uint64_t>(in);
  g.offsets_.resize(n + 1);
  for (auto& o : g.offsets_) o = get<std::uint64_t>(in);
  if (g.offsets_.back() != len) throw ParseError("corrupt snapshot offsets");
  g.neighbors_.resize(len);
  g.weights_.resize(len);
  in.read(reinterpret_cast<char*>(g.neighbors_.data()), static_cast<std::streamsize>(len * sizeof(NodeId)));
  in.read(reinterpret_cast<char*>(g.weights_.data()), static_cast<std::streamsize>(len * sizeof(Weight)));
  if (!in) throw ParseError("truncated snapshot file");
  for (std::size_t u = 0; u < n; ++u) {
    if (g.offsets_[u + 1] > g.offsets_[u]) ++g.node_count_;
  }
  for (std::size_t i = 0; i < len; ++i) g.total_weight_ += g.weights_[i];
  g.total_weight_ /= 2;
  return g;
}

void GraphSnapshot::write_csv(std::ostream& out, const AuthorIndex& authors) const {
  out << "u,v,weight\n";
  for_each_edge([&](NodeId u, NodeId v, Weight w) {
    out << csv_field(authors.id_of(u)) << ',' << csv_field(authors.id_of(v)) << ',' << w << '\n';
  });
}

}  // namespace coauthlp
