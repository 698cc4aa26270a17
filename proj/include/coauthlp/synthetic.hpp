#pragma once

// Seeded temporal co-authorship generator: authors arrive over time inside
// planted communities and co-author through repeat collaboration, triadic
// closure, same-community and occasional cross-community picks. Profiles
// carry community-correlated concepts, institutions and countries.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "coauthlp/profiles.hpp"

namespace coauthlp {

struct SynthConfig {
  std::uint64_t seed = 42;
  std::size_t authors = 2000;
  int first_year = 2004;
  int last_year = 2023;
  int communities = 8;
  double arrival_growth = 1.10;  // yearly growth factor of new-author arrivals
  double lead_rate = 0.35;       // chance an active author starts a paper in a year
  double repeat = 0.35;          // pick a previous co-author
  double closure = 0.25;         // pick a co-author's co-author
  double cross_community = 0.06;
  double profile_missing = 0.02;  // share of authors without a profile

  void validate() const;
};

struct SynthEdgeRow {
  std::string src;
  std::string dst;
  int year;
  std::uint64_t weight;
};

struct SynthDataset {
  std::vector<SynthEdgeRow> edges;  // one row per (pair, year), weights summed
  std::vector<AuthorProfile> profiles;
  std::vector<int> community_of;  // planted community per author index
};

SynthDataset generate_synthetic(const SynthConfig& cfg);

/// `src,dst,year,weight` with a header line.
void write_synthetic_edges(const SynthDataset& d, std::ostream& out);

}  // namespace coauthlp
