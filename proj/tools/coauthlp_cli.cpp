// coauthlp command-line driver. Every pipeline stage is a subcommand that
// reads and writes artifacts under the configured output directory.

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "coauthlp/config.hpp"
#include "coauthlp/error.hpp"
#include "coauthlp/graph.hpp"
#include "coauthlp/io.hpp"
#include "coauthlp/openalex.hpp"
#include "coauthlp/pipeline.hpp"

namespace {

using namespace coauthlp;

struct Options {
  std::string config = "config.json";
  std::string era;
  std::vector<std::string> methods;
  std::string variant;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::string out;
  // synth
  std::string synth_dir = "synthetic";
  std::uint64_t synth_seed = 42;
  std::size_t synth_authors = 2000;
  // fetch-profiles
  bool merge = false;
};

RunConfig load_config(const Options& o) {
  auto cfg = RunConfig::load(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.workers) cfg.workers = *o.workers;
  if (!o.out.empty()) cfg.out_dir = std::filesystem::absolute(o.out);
  return cfg;
}

RunFlags flags_of(const Options& o) {
  RunFlags f;
  f.era = o.era;
  f.methods = o.methods;
  if (!o.variant.empty()) {
    auto v = parse_prompt_variant(o.variant);
    if (!v) throw InvalidArgument("unknown prompt variant: " + o.variant);
    f.variant = *v;
  }
  return f;
}

// Fetches a profile for every author in the edge file that lacks one.
void fetch_profiles(const RunConfig& cfg, bool merge) {
  cfg.validate_paths();
  if (cfg.profiles.empty()) throw InvalidArgument("fetch-profiles: set paths.profiles to the output file");
  auto edges = ingest_edges(cfg.edges, cfg.year_range);
  ProfileStore store;
  if (merge && std::filesystem::exists(cfg.profiles)) store = ingest_profiles(cfg.profiles).profiles;
  std::vector<std::string> ids;
  for (const auto& id : edges.data.authors.ids())
    if (!store.find(id)) ids.push_back(id);
  OpenAlexConfig oc;
  oc.mailto = cfg.openalex_mailto;
  oc.requests_per_second = cfg.openalex_rps;
  oc.cache_dir = cfg.cache_dir / "openalex";
  OpenAlexClient client(oc, std::shared_ptr<HttpTransport>(make_http_transport()));
  auto outcomes = client.fetch_many(ids, 4);
  std::size_t failed = 0;
  for (auto& o : outcomes) {
    if (o.profile) {
      o.profile->id = o.id;
      store.upsert(std::move(*o.profile));
    } else {
      ++failed;
      std::cerr << "warning: " << o.id << ": " << o.error << '\n';
    }
  }
  std::ostringstream os;
  write_profiles_jsonl(store, os);
  write_file_atomic(cfg.profiles, os.str());
  std::cerr << fmt::format("fetch-profiles: {} requested, {} stored, {} failed, {} network calls\n", ids.size(),
                           store.size(), failed, client.network_calls());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Co-authorship link prediction pipeline"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", o.config, "Run configuration (JSON)")->capture_default_str();
    sub->add_option("--seed", o.seed, "Override the configured seed");
    sub->add_option("--workers", o.workers, "Worker threads (0 = all cores)");
    sub->add_option("--out", o.out, "Override the output directory");
  };

  std::vector<std::pair<std::string, CLI::App*>> stages;
  auto add_stage = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub);
    sub->add_option("--era", o.era, "Restrict to one era");
    stages.emplace_back(name, sub);
    return sub;
  };
  add_stage("ingest", "Validate and normalise the edge and profile inputs");
  add_stage("stats", "Per-window growth statistics and era boundaries");
  add_stage("split", "Train/eval snapshots and edge classes per era");
  add_stage("communities", "Louvain communities on each training graph");
  add_stage("candidates", "Two-hop candidate pairs inside the selected communities");
  add_stage("train-embeddings", "node2vec embeddings per era")
      ->add_flag_function("--csv", [&](std::int64_t) { o.methods = {"csv"}; }, "Also write embeddings.csv");
  add_stage("score", "Score candidates")
      ->add_option("--method", o.methods, "heuristics, embeddings, metadata (repeatable; default all)");
  add_stage("sample", "Natural and balanced stratified samples");
  add_stage("llm", "LLM predictions for sampled pairs")->add_option("--variant", o.variant, "Prompt variant");
  add_stage("coldstart", "Cold-start analysis and scoring")->add_option("--variant", o.variant, "Prompt variant");
  add_stage("evaluate", "Metrics, tables and figures per era")->add_option("--variant", o.variant, "Prompt variant");
  add_stage("report", "Combine and validate per-era reports");
  add_stage("all", "Run every stage in order")->add_option("--variant", o.variant, "Prompt variant");

  auto* synth = app.add_subcommand("synth", "Write a synthetic workspace (edges, profiles, config)");
  synth->add_option("--dir", o.synth_dir, "Target directory")->capture_default_str();
  synth->add_option("--seed", o.synth_seed, "Generator seed")->capture_default_str();
  synth->add_option("--authors", o.synth_authors, "Number of authors")->capture_default_str();

  auto* fetch = app.add_subcommand("fetch-profiles", "Fetch author profiles from OpenAlex");
  add_common(fetch);
  fetch->add_flag("--merge", o.merge, "Keep profiles already in the output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      write_synthetic_workspace(o.synth_dir, o.synth_seed, o.synth_authors);
      std::cerr << "synth: wrote " << o.synth_dir << "/{edges.csv,profiles.jsonl,config.json}\n";
      return 0;
    }
    if (fetch->parsed()) {
      fetch_profiles(load_config(o), o.merge);
      return 0;
    }
    for (const auto& [name, sub] : stages) {
      if (!sub->parsed()) continue;
      run_command(name, load_config(o), flags_of(o), std::cerr);
      return 0;
    }
  } catch (const MissingArtifact& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
