#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "coauthlp/config.hpp"
#include "coauthlp/error.hpp"
#include "coauthlp/evaluation.hpp"
#include "coauthlp/io.hpp"
#include "coauthlp/pipeline.hpp"
#include "coauthlp/synthetic.hpp"

using namespace coauthlp;
namespace fs = std::filesystem;

namespace {

struct Workspace {
  fs::path dir;
  explicit Workspace(const std::string& name, std::size_t authors = 600)
      : dir(fs::temp_directory_path() / name) {
    fs::remove_all(dir);
    write_synthetic_workspace(dir, 42, authors);
  }
  ~Workspace() { fs::remove_all(dir); }
  RunConfig config() const {
    auto c = RunConfig::load(dir / "config.json");
    c.workers = 1;
    return c;
  }
};

}  // namespace

TEST_CASE("config defaults, overrides and validation") {
  auto c = RunConfig::from_json(nlohmann::json::object(), "/base");
  CHECK(c.seed == 42);
  CHECK(c.eras.size() == 3);
  CHECK(c.llm.requests_per_minute == 22.5);
  CHECK(c.out_dir == fs::path("/base/out"));
  auto j = c.to_json();
  auto again = RunConfig::from_json(j, "/base");
  CHECK(again.hash() == c.hash());
  CHECK(RunConfig::from_json({{"seed", 7}}, "/base").hash() != c.hash());
  CHECK_THROWS_AS(RunConfig::from_json({{"llm", {{"backend", "other"}}}}, "/"), InvalidArgument);
  CHECK_THROWS_AS(RunConfig::from_json({{"heuristics", {"XYZ"}}}, "/"), InvalidArgument);
  CHECK_THROWS_AS(RunConfig::from_json({{"eras", {{{"name", "e"}, {"train", {{2004, 2005}}}, {"eval", {2005, 2006}}}}}}, "/"),
                  InvalidArgument);
  CHECK_THROWS_AS(c.era("nope"), InvalidArgument);
  CHECK_THROWS_AS(c.validate_paths(), InvalidArgument);
}

TEST_CASE("synthetic generator is deterministic") {
  SynthConfig sc;
  sc.authors = 300;
  auto a = generate_synthetic(sc);
  auto b = generate_synthetic(sc);
  CHECK(a.edges.size() == b.edges.size());
  CHECK(a.profiles == b.profiles);
  std::ostringstream x, y;
  write_synthetic_edges(a, x);
  write_synthetic_edges(b, y);
  CHECK(x.str() == y.str());
  sc.authors = 2;
  CHECK_THROWS_AS(generate_synthetic(sc), InvalidArgument);
}

TEST_CASE("stages refuse to run without their inputs") {
  Workspace ws("coauthlp_pipeline_missing");
  auto cfg = ws.config();
  std::ostringstream log;
  CHECK_THROWS_AS(run_command("split", cfg, {}, log), MissingArtifact);
  run_command("ingest", cfg, {}, log);
  run_command("split", cfg, {}, log);
  try {
    run_command("evaluate", cfg, {"era1", {}, {}}, log);
    FAIL("expected MissingArtifact");
  } catch (const MissingArtifact& e) {
    CHECK(e.producer() == "score");
  }
  CHECK_THROWS_AS(run_command("frobnicate", cfg, {}, log), InvalidArgument);
  CHECK_THROWS_AS(run_command("split", cfg, {"era9", {}, {}}, log), InvalidArgument);
}

TEST_CASE("full pipeline produces a valid, reproducible report") {
  Workspace ws("coauthlp_pipeline_full");
  auto cfg = ws.config();
  std::ostringstream log;
  run_command("all", cfg, {}, log);
  auto report = read_file(cfg.out_dir / "report.json");
  REQUIRE(report);
  auto j = nlohmann::json::parse(*report);
  for (const auto& era : {"era1", "era2", "era3"}) {
    REQUIRE(j["eras"].contains(era));
    CHECK(validate_report(j["eras"][era]).empty());
  }
  auto era2 = read_file(cfg.out_dir / "era2" / "report" / "report.json");

  // Rerunning a stage from cached artifacts gives byte-identical output.
  run_command("evaluate", cfg, {"era2", {}, {}}, log);
  CHECK(read_file(cfg.out_dir / "era2" / "report" / "report.json") == era2);
  auto llm_before = read_file(cfg.out_dir / "era2" / "llm_base.csv");
  run_command("llm", cfg, {"era2", {}, {}}, log);
  CHECK(read_file(cfg.out_dir / "era2" / "llm_base.csv") == llm_before);
  CHECK(log.str().find("from cache") != std::string::npos);

  // Another prompt variant lands in its own file.
  run_command("llm", cfg, {"era1", {}, PromptVariant::NoConcepts}, log);
  CHECK(fs::exists(cfg.out_dir / "era1" / "llm_no_concepts.csv"));
  run_command("llm", cfg, {"era1", {}, PromptVariant::PlusNetworkStats}, log);
  run_command("llm", cfg, {"era1", {}, PromptVariant::EraRestricted}, log);
  CHECK(fs::exists(cfg.out_dir / "era1" / "llm_era_restricted.csv"));
}
