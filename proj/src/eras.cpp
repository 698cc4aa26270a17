#include "coauthlp/eras.hpp"

#include <algorithm>

#include "coauthlp/error.hpp"

namespace coauthlp {

void EraConfig::validate() const {
  if (train_windows.empty()) throw InvalidArgument("era " + name + " has no training window");
  if (eval_window.empty()) throw InvalidArgument("era " + name + " has an empty eval window");
  int latest = train_windows.front().last;
  for (std::size_t i = 0; i < train_windows.size(); ++i) {
    const auto& w = train_windows[i];
    if (w.empty()) throw InvalidArgument("era " + name + " has an empty training window");
    latest = std::max(latest, w.last);
    for (std::size_t j = i + 1; j < train_windows.size(); ++j)
      if (w.overlaps(train_windows[j])) throw InvalidArgument("era " + name + " has overlapping training windows");
  }
  if (eval_window.first <= latest)
    throw InvalidArgument("era " + name + ": eval window must start after the last training window");
}

std::vector<EraConfig> default_eras() {
  return {
      {"era1", {{2004, 2005}, {2006, 2007}}, {2008, 2009}},
      {"era2", {{2010, 2011}, {2012, 2013}, {2014, 2015}}, {2016, 2017}},
      {"era3", {{2018, 2019}, {2020, 2021}}, {2022, 2023}},
  };
}

std::vector<YearRange> two_year_windows(int first, int last) {
  std::vector<YearRange> out;
  for (int y = first; y <= last; y += 2) out.push_back({y, std::min(y + 1, last)});
  return out;
}

const char* to_string(EdgeClass c) noexcept {
  switch (c) {
    case EdgeClass::Continued: return "continued";
    case EdgeClass::New: return "new";
    case EdgeClass::Dropped: return "dropped";
  }
  return "?";
}

std::vector<std::pair<NodeId, NodeId>> EdgeClassification::pairs_of(EdgeClass c) const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (const auto& e : edges)
    if (e.cls == c) out.emplace_back(e.u, e.v);
  return out;
}

EdgeClassification classify_edges(const GraphSnapshot& train, const GraphSnapshot& eval) {
  if (train.id_space() != eval.id_space())
    throw InvalidArgument("train and eval snapshots use different id spaces");
  EdgeClassification out;
  for (NodeId u = 0; u < train.id_space(); ++u) {
    auto a = train.neighbors(u);
    auto b = eval.neighbors(u);
    // Only v > u, so each undirected edge is visited once.
    auto ia = std::upper_bound(a.begin(), a.end(), u);
    auto ib = std::upper_bound(b.begin(), b.end(), u);
    while (ia != a.end() || ib != b.end()) {
      if (ib == b.end() || (ia != a.end() && *ia < *ib)) {
        out.edges.push_back({u, *ia++, EdgeClass::Dropped});
        ++out.dropped;
      } else if (ia == a.end() || *ib < *ia) {
        out.edges.push_back({u, *ib++, EdgeClass::New});
        ++out.added;
      } else {
        out.edges.push_back({u, *ia, EdgeClass::Continued});
        ++ia;
        ++ib;
        ++out.continued;
      }
    }
  }
  return out;
}

std::vector<WindowStats> stats_from_counts(const std::vector<YearRange>& windows,
                                           const std::vector<std::uint64_t>& authors,
                                           const std::vector<std::uint64_t>& edges) {
  if (windows.size() != authors.size() || windows.size() != edges.size())
    throw InvalidArgument("window, author and edge count lists differ in length");
  std::vector<WindowStats> out(windows.size());
  for (std::size_t i = 0; i < windows.size(); ++i) {
    auto& s = out[i];
    s.window = windows[i];
    s.authors = authors[i];
    s.edges = edges[i];
    if (s.authors > 0) {
      s.avg_degree = 2.0 * static_cast<double>(s.edges) / static_cast<double>(s.authors);
      s.edges_per_author = static_cast<double>(s.edges) / static_cast<double>(s.authors);
    }
    if (i > 0) {
      if (edges[i - 1] > 0) s.edge_growth = static_cast<double>(edges[i]) / static_cast<double>(edges[i - 1]);
      if (authors[i - 1] > 0)
        s.author_growth = static_cast<double>(authors[i]) / static_cast<double>(authors[i - 1]);
    }
  }
  return out;
}

std::vector<WindowStats> window_stats(const EdgeList& edges, const std::vector<YearRange>& windows) {
  for (std::size_t i = 0; i + 1 < windows.size(); ++i) {
    if (windows[i + 1].first <= windows[i].last)
      throw InvalidArgument("stats windows must be ordered and non-overlapping");
  }
  std::vector<std::uint64_t> authors, counts;
  for (const auto& w : windows) {
    auto g = build_snapshot(edges, w);
    authors.push_back(g.node_count());
    counts.push_back(g.edge_count());
  }
  return stats_from_counts(windows, authors, counts);
}

std::vector<Boundary> detect_boundaries(const std::vector<WindowStats>& stats, BoundaryThresholds t) {
  if (stats.size() < 2) throw InvalidArgument("boundary detection needs at least two windows");
  std::vector<Boundary> out;
  for (std::size_t i = 1; i < stats.size(); ++i) {
    const auto& s = stats[i];
    if (!s.edge_growth) continue;
    double eg = *s.edge_growth;
    double ag = s.author_growth.value_or(0.0);
    if (eg >= t.spike) out.push_back({i, BoundaryKind::Spike, eg, ag});
    else if (eg <= t.decel && s.author_growth && ag > eg) out.push_back({i, BoundaryKind::Deceleration, eg, ag});
  }
  return out;
}

}  // namespace coauthlp
