#include "coauthlp/heuristics.hpp"

#include <cmath>

#include "coauthlp/error.hpp"
#include "coauthlp/parallel.hpp"
#include "coauthlp/rng.hpp"

namespace coauthlp {

const char* to_string(Heuristic h) noexcept {
  switch (h) {
    case Heuristic::CN: return "CN";
    case Heuristic::JC: return "JC";
    case Heuristic::AA: return "AA";
    case Heuristic::PA: return "PA";
    case Heuristic::RA: return "RA";
    case Heuristic::EdgeWeight: return "EdgeWeight";
    case Heuristic::Random: return "Random";
  }
  return "?";
}

std::optional<Heuristic> parse_heuristic(std::string_view name) noexcept {
  for (auto h : {Heuristic::CN, Heuristic::JC, Heuristic::AA, Heuristic::PA, Heuristic::RA, Heuristic::EdgeWeight,
                 Heuristic::Random})
    if (name == to_string(h)) return h;
  return std::nullopt;
}

std::vector<Heuristic> topology_heuristics() {
  return {Heuristic::CN, Heuristic::JC, Heuristic::AA, Heuristic::PA, Heuristic::RA};
}

namespace {

template <class F>
void for_each_common(const GraphSnapshot& g, NodeId u, NodeId v, F&& f) {
  g.require(u);
  g.require(v);
  auto a = g.neighbors(u);
  auto b = g.neighbors(v);
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      f(*ia);
      ++ia;
      ++ib;
    }
  }
}

}  // namespace

double common_neighbors(const GraphSnapshot& g, NodeId u, NodeId v) {
  std::size_t n = 0;
  for_each_common(g, u, v, [&](NodeId) { ++n; });
  return static_cast<double>(n);
}

double jaccard(const GraphSnapshot& g, NodeId u, NodeId v) {
  std::size_t inter = 0;
  for_each_common(g, u, v, [&](NodeId) { ++inter; });
  std::size_t uni = g.degree(u) + g.degree(v) - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double adamic_adar(const GraphSnapshot& g, NodeId u, NodeId v) {
  double s = 0.0;
  // A common neighbour touches both u and v, so its degree is at least 2.
  for_each_common(g, u, v, [&](NodeId w) { s += 1.0 / std::log(static_cast<double>(g.degree(w))); });
  return s;
}

double resource_allocation(const GraphSnapshot& g, NodeId u, NodeId v) {
  double s = 0.0;
  for_each_common(g, u, v, [&](NodeId w) { s += 1.0 / static_cast<double>(g.degree(w)); });
  return s;
}

double preferential_attachment(const GraphSnapshot& g, NodeId u, NodeId v) {
  g.require(u);
  g.require(v);
  return static_cast<double>(g.degree(u)) * static_cast<double>(g.degree(v));
}

double edge_weight_score(const GraphSnapshot& g, NodeId u, NodeId v) {
  g.require(u);
  g.require(v);
  auto w = g.edge_weight(u, v);
  if (!w) throw InvalidArgument("edge weight is only defined for training edges");
  return static_cast<double>(*w);
}

double random_score(std::uint64_t seed, std::size_t index) noexcept {
  return unit_from_bits(derive_seed(seed, index, 0x5eed));
}

double score(const GraphSnapshot& g, Heuristic h, NodeId u, NodeId v, std::uint64_t seed, std::size_t index) {
  switch (h) {
    case Heuristic::CN: return common_neighbors(g, u, v);
    case Heuristic::JC: return jaccard(g, u, v);
    case Heuristic::AA: return adamic_adar(g, u, v);
    case Heuristic::PA: return preferential_attachment(g, u, v);
    case Heuristic::RA: return resource_allocation(g, u, v);
    case Heuristic::EdgeWeight: return edge_weight_score(g, u, v);
    case Heuristic::Random:
      g.require(u);
      g.require(v);
      return random_score(seed, index);
  }
  throw InvalidArgument("unknown heuristic");
}

std::vector<HeuristicScore> score_batch(const GraphSnapshot& g, std::span<const NodePair> pairs,
                                        std::span<const Heuristic> methods, std::uint64_t seed, unsigned workers) {
  std::vector<HeuristicScore> out(pairs.size() * methods.size());
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (pairs.size() + kChunk - 1) / kChunk;
  parallel_for(chunks, workers, [&](std::size_t c) {
    for (std::size_t i = c * kChunk; i < std::min(pairs.size(), (c + 1) * kChunk); ++i) {
      auto [u, v] = pairs[i];
      for (std::size_t m = 0; m < methods.size(); ++m)
        out[i * methods.size() + m] = {u, v, methods[m], score(g, methods[m], u, v, seed, i)};
    }
  });
  return out;
}

}  // namespace coauthlp
