#include <doctest.h>

#include <sstream>

#include "coauthlp/error.hpp"
#include "coauthlp/graph.hpp"
#include "coauthlp/text.hpp"
#include "oracles.hpp"

using namespace coauthlp;

TEST_CASE("ingest merges duplicates, drops self-loops and filters years") {
  std::istringstream in(
      "# provenance line\n"
      "src,dst,year,weight\n"
      "a,b,2004,2\n"
      "b,a,2004,1\n"
      "a,a,2004,1\n"
      "a,c,2010,1\n"
      "c,d,2006\n");
  auto r = ingest_edges(in, YearRange{2004, 2007});
  CHECK(r.report.rows_read == 5);
  CHECK(r.report.self_loops == 1);
  CHECK(r.report.out_of_range == 1);
  CHECK(r.report.duplicates_merged == 1);
  REQUIRE(r.data.edges.size() == 2);
  CHECK(r.data.edges[0].weight == 3);
  CHECK(r.data.edges[1].weight == 1);
  CHECK(r.data.authors.id_of(r.data.edges[1].u) == "c");
}

TEST_CASE("ingest reports malformed rows with their line number") {
  std::istringstream missing_header("x,y\n1,2\n");
  CHECK_THROWS_AS(ingest_edges(missing_header), ParseError);
  std::istringstream bad_year("src,dst,year\na,b,20x4\n");
  try {
    ingest_edges(bad_year);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("exported edges re-ingest to identical ids") {
  std::istringstream in("src,dst,year\nx,y,2001\ny,z,2002\nz,x,2002\nx,y,2003\n");
  auto first = ingest_edges(in);
  std::ostringstream out;
  export_edges_csv(first.data, out);
  std::istringstream again(out.str());
  auto second = ingest_edges(again);
  CHECK(second.data.edges == first.data.edges);
  CHECK(second.data.authors.ids() == first.data.authors.ids());
}

TEST_CASE("snapshot aggregates across windows and keeps the id space") {
  std::istringstream in("src,dst,year,weight\na,b,2004,1\na,b,2005,2\nb,c,2008,1\nd,e,2010,4\n");
  auto data = ingest_edges(in).data;
  std::vector<YearRange> windows{{2004, 2005}, {2008, 2009}};
  auto g = build_snapshot(data, windows);
  CHECK(g.id_space() == 5);
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.edge_weight(0, 1) == Weight{3});
  CHECK(g.strength(1) == 4);
  CHECK_FALSE(g.active(3));
  CHECK(g.total_weight() == 4);

  std::stringstream bin;
  g.write_binary(bin);
  CHECK(GraphSnapshot::read_binary(bin) == g);
}

TEST_CASE("snapshot adjacency matches a set-based oracle") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 2 + rng.below(40);
    auto pairs = oracle::random_pairs(n, 0.2, rng);
    auto g = GraphSnapshot::from_pairs(n, pairs);
    oracle::Adjacency a(n, pairs);
    for (NodeId u = 0; u < n; ++u) {
      CHECK(g.degree(u) == a.nb[u].size());
      for (NodeId v = 0; v < n; ++v) CHECK(g.has_edge(u, v) == a.adjacent(u, v));
    }
    CHECK(g.edge_count() == pairs.size());
  }
}

TEST_CASE("pair keys are order independent and reversible") {
  CHECK(pair_key(3, 9) == pair_key(9, 3));
  CHECK(unpack_pair(pair_key(9, 3)) == std::pair<NodeId, NodeId>{3, 9});
}

TEST_CASE("text helpers") {
  CHECK(trim("  a b ") == "a b");
  CHECK(normalize_label("  Tongji   University ") == "tongji university");
  CHECK(split_csv(R"(a,"b,c","d""e",)") == std::vector<std::string>{"a", "b,c", "d\"e", ""});
  CHECK(csv_field("x,y") == "\"x,y\"");
  CHECK(parse_int("12") == 12);
  CHECK_FALSE(parse_int("12a"));
  CHECK(format_number(4.04) == "4.04");
  CHECK(format_number(10) == "10");
}
