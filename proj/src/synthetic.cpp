#include "coauthlp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <unordered_set>

#include <fmt/format.h>

#include "coauthlp/error.hpp"
#include "coauthlp/rng.hpp"

namespace coauthlp {

void SynthConfig::validate() const {
  if (authors < 4) throw InvalidArgument("synthetic: need at least 4 authors");
  if (last_year < first_year) throw InvalidArgument("synthetic: empty year range");
  if (communities < 1) throw InvalidArgument("synthetic: need at least one community");
  if (!(arrival_growth > 0)) throw InvalidArgument("synthetic: arrival_growth must be positive");
  for (double x : {lead_rate, repeat, closure, cross_community, profile_missing})
    if (!(x >= 0 && x <= 1)) throw InvalidArgument("synthetic: rates must lie in [0,1]");
  if (repeat + closure + cross_community > 1) throw InvalidArgument("synthetic: pick rates exceed 1");
}

namespace {

const std::vector<std::string> kConcepts = {
    "Machine learning",      "Computer vision",        "Natural language processing", "Reinforcement learning",
    "Robotics",              "Speech recognition",     "Knowledge representation",    "Planning",
    "Information retrieval", "Data mining",            "Bayesian inference",          "Optimization",
    "Graph theory",          "Computational biology",  "Signal processing",           "Human-computer interaction",
    "Multi-agent systems",   "Fuzzy logic",            "Evolutionary computation",    "Constraint satisfaction",
    "Image segmentation",    "Machine translation",    "Recommender systems",         "Causal inference",
    "Computer security",     "Medical imaging",        "Autonomous driving",          "Statistical learning",
    "Ontology",              "Logic programming",      "Neural networks",             "Kernel methods",
};

const std::vector<std::string> kGeneral = {"Artificial intelligence", "Computer science", "Mathematics",
                                           "Algorithm",               "Deep learning",    "Statistics",
                                           "Pattern recognition",     "Engineering"};

const std::vector<std::string> kCountries = {"US", "CN", "GB", "DE", "IN", "JP", "CA", "FR", "KR", "BR", "AU", "IT"};
const std::vector<std::string> kEthnicities = {"Asian", "White", "Hispanic", "Black"};
const std::vector<std::string> kFirst = {"Alex", "Bo",   "Chen",  "Dana", "Eli",  "Fatima", "Gita", "Hiro",
                                         "Ines", "Jun",  "Kofi",  "Lena", "Mei",  "Nadia",  "Omar", "Priya",
                                         "Quinn", "Ravi", "Sofia", "Tao",  "Uma",  "Victor", "Wei",  "Yara"};
const std::vector<std::string> kLast = {"Anders", "Bauer", "Costa",  "Dubois", "Evans",  "Fischer", "Garcia",
                                        "Huang",  "Ito",   "Jensen", "Kim",    "Li",     "Martin",  "Nguyen",
                                        "Okafor", "Patel", "Rossi",  "Singh",  "Tanaka", "Wang",    "Zhang"};

template <class T>
const T& pick(const std::vector<T>& v, Rng& rng) {
  return v[static_cast<std::size_t>(rng.below(v.size()))];
}

std::string author_id(std::size_t i) { return fmt::format("A{:05d}", i); }

}  // namespace

SynthDataset generate_synthetic(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const std::size_t n = cfg.authors;
  const int years = cfg.last_year - cfg.first_year + 1;
  const auto k = static_cast<std::size_t>(cfg.communities);

  // Arrival years: geometric growth, and a founding cohort present from the start.
  std::vector<double> year_weight(static_cast<std::size_t>(years));
  for (int y = 0; y < years; ++y) year_weight[static_cast<std::size_t>(y)] = std::pow(cfg.arrival_growth, y);
  year_weight[0] += 3.0;
  double total_w = 0;
  for (double w : year_weight) total_w += w;
  std::vector<int> arrival(n);
  for (auto& a : arrival) {
    double r = rng.uniform() * total_w;
    int y = 0;
    while (y + 1 < years && r >= year_weight[static_cast<std::size_t>(y)]) r -= year_weight[static_cast<std::size_t>(y++)];
    a = cfg.first_year + y;
  }
  std::sort(arrival.begin(), arrival.end());

  // Community sizes follow a mild power law so one community is clearly largest.
  std::vector<double> comm_weight(k);
  double total_c = 0;
  for (std::size_t c = 0; c < k; ++c) total_c += comm_weight[c] = std::pow(static_cast<double>(c + 1), -0.7);
  SynthDataset out;
  out.community_of.resize(n);
  for (auto& c : out.community_of) {
    double r = rng.uniform() * total_c;
    std::size_t i = 0;
    while (i + 1 < k && r >= comm_weight[i]) r -= comm_weight[i++];
    c = static_cast<int>(i);
  }

  std::vector<std::vector<std::uint32_t>> nbrs(n);
  std::unordered_set<std::uint64_t> known;
  std::vector<std::vector<std::uint32_t>> active_in(k);
  std::vector<std::uint32_t> active;
  std::vector<std::uint64_t> papers(n, 0);
  std::size_t next_arrival = 0;

  for (int year = cfg.first_year; year <= cfg.last_year; ++year) {
    while (next_arrival < n && arrival[next_arrival] <= year) {
      auto a = static_cast<std::uint32_t>(next_arrival++);
      active.push_back(a);
      active_in[static_cast<std::size_t>(out.community_of[a])].push_back(a);
    }
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> year_pairs;
    auto choose = [&](std::uint32_t a) -> std::uint32_t {
      const double r = rng.uniform();
      if (r < cfg.repeat && !nbrs[a].empty()) return pick(nbrs[a], rng);
      if (r < cfg.repeat + cfg.closure && !nbrs[a].empty()) {
        auto w = pick(nbrs[a], rng);
        return pick(nbrs[w], rng);
      }
      if (r < 1.0 - cfg.cross_community) return pick(active_in[static_cast<std::size_t>(out.community_of[a])], rng);
      return pick(active, rng);
    };
    const std::size_t active_now = active.size();
    for (std::size_t i = 0; i < active_now; ++i) {
      const auto lead = active[i];
      if (rng.uniform() >= cfg.lead_rate) continue;
      const std::size_t team_size = 2 + static_cast<std::size_t>(rng.below(3));
      std::vector<std::uint32_t> team{lead};
      for (int attempt = 0; attempt < 8 && team.size() < team_size; ++attempt) {
        auto c = choose(lead);
        if (std::find(team.begin(), team.end(), c) == team.end()) team.push_back(c);
      }
      if (team.size() < 2) continue;
      for (auto m : team) ++papers[m];
      for (std::size_t x = 0; x < team.size(); ++x)
        for (std::size_t y = x + 1; y < team.size(); ++y) {
          auto a = std::min(team[x], team[y]);
          auto b = std::max(team[x], team[y]);
          ++year_pairs[{a, b}];
          if (known.insert((static_cast<std::uint64_t>(a) << 32) | b).second) {
            nbrs[a].push_back(b);
            nbrs[b].push_back(a);
          }
        }
    }
    for (const auto& [pr, w] : year_pairs) out.edges.push_back({author_id(pr.first), author_id(pr.second), year, w});
  }

  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(out.community_of[i]);
    AuthorProfile p;
    p.id = author_id(i);
    p.display_name = pick(kFirst, rng) + " " + pick(kLast, rng);
    // Community pools overlap by half so neighbouring communities share topics.
    std::vector<std::string> pool;
    for (std::size_t j = 0; j < 6; ++j) pool.push_back(kConcepts[(c * 3 + j) % kConcepts.size()]);
    rng.shuffle(std::span<std::string>(pool));
    p.concepts.assign(pool.begin(), pool.begin() + 3);
    std::vector<std::string> general = kGeneral;
    rng.shuffle(std::span<std::string>(general));
    p.concepts.insert(p.concepts.end(), general.begin(), general.begin() + 2);
    p.country_code = rng.uniform() < 0.6 ? kCountries[c % kCountries.size()] : pick(kCountries, rng);
    const bool asian_country = p.country_code == "CN" || p.country_code == "JP" || p.country_code == "KR" ||
                               p.country_code == "IN";
    const double r = rng.uniform();
    if (r < 0.75) {
      p.ethnicity = asian_country ? "Asian" : "White";
    } else if (r < 0.95) {
      p.ethnicity = pick(kEthnicities, rng);
    }  // else left absent
    p.institution = fmt::format("{} Institute of Technology {}", kLast[c % kLast.size()], 1 + rng.below(3));
    p.works_count = papers[i] + rng.below(20);
    p.cited_by_count = p.works_count * (5 + rng.below(40));
    if (rng.uniform() < cfg.profile_missing) continue;
    out.profiles.push_back(std::move(p));
  }
  return out;
}

void write_synthetic_edges(const SynthDataset& d, std::ostream& out) {
  out << "src,dst,year,weight\n";
  for (const auto& e : d.edges) out << e.src << ',' << e.dst << ',' << e.year << ',' << e.weight << '\n';
}

}  // namespace coauthlp
