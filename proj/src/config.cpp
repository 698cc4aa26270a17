#include "coauthlp/config.hpp"

#include <fstream>

#include <fmt/format.h>

#include "coauthlp/error.hpp"
#include "coauthlp/hash.hpp"

namespace coauthlp {

namespace {

using nlohmann::json;

YearRange year_range_from(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw InvalidArgument(what + ": expected [first_year, last_year]");
  YearRange r{j[0].get<int>(), j[1].get<int>()};
  if (r.empty()) throw InvalidArgument(what + ": empty year range");
  return r;
}

json year_range_json(const YearRange& r) { return json::array({r.first, r.last}); }

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return {};
  std::filesystem::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

std::string relative_to(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.empty()) return "";
  auto rel = p.lexically_relative(base);
  return rel.empty() ? p.generic_string() : rel.generic_string();
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(fmt::format("config: '{}' has the wrong type", key));
  }
}

}  // namespace

RunConfig RunConfig::from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  RunConfig c;
  c.base_dir = base_dir;
  const json paths = j.value("paths", json::object());
  c.edges = resolve(base_dir, get_or<std::string>(paths, "edges", ""));
  c.profiles = resolve(base_dir, get_or<std::string>(paths, "profiles", ""));
  c.cache_dir = resolve(base_dir, get_or<std::string>(paths, "cache", "cache"));
  c.out_dir = resolve(base_dir, get_or<std::string>(paths, "out", "out"));
  if (j.contains("year_range") && !j["year_range"].is_null()) c.year_range = year_range_from(j["year_range"], "year_range");

  if (j.contains("eras")) {
    c.eras.clear();
    for (const auto& e : j["eras"]) {
      EraConfig era;
      era.name = get_or<std::string>(e, "name", "");
      if (era.name.empty()) throw InvalidArgument("config: every era needs a name");
      for (const auto& w : e.value("train", json::array())) era.train_windows.push_back(year_range_from(w, era.name + ".train"));
      era.eval_window = year_range_from(e.value("eval", json()), era.name + ".eval");
      era.validate();
      for (const auto& other : c.eras)
        if (other.name == era.name) throw InvalidArgument("config: duplicate era name " + era.name);
      c.eras.push_back(std::move(era));
    }
  }

  const json stats = j.value("stats", json::object());
  c.stats_first_year = get_or(stats, "first_year", c.stats_first_year);
  c.stats_last_year = get_or(stats, "last_year", c.stats_last_year);
  c.boundaries.spike = get_or(stats, "spike", c.boundaries.spike);
  c.boundaries.decel = get_or(stats, "decel", c.boundaries.decel);

  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  c.workers = get_or<unsigned>(j, "workers", c.workers);

  const json comm = j.value("community", json::object());
  c.community_seed = get_or<std::uint64_t>(comm, "seed", c.seed);
  c.community_resolution = get_or(comm, "resolution", c.community_resolution);
  c.top_communities = get_or<std::size_t>(comm, "top_k", c.top_communities);
  if (c.top_communities < 1) throw InvalidArgument("config: community.top_k must be >= 1");

  const json sampling = j.value("sampling", json::object());
  c.natural_total = get_or<std::size_t>(sampling, "natural_total", c.natural_total);
  c.balanced_total = get_or<std::size_t>(sampling, "balanced_total", c.balanced_total);

  if (j.contains("heuristics")) {
    c.heuristics.clear();
    for (const auto& h : j["heuristics"]) {
      auto parsed = parse_heuristic(h.get<std::string>());
      if (!parsed) throw InvalidArgument("config: unknown heuristic " + h.get<std::string>());
      c.heuristics.push_back(*parsed);
    }
  }

  const json emb = j.value("embedding", json::object());
  auto& e = c.embedding;
  e.dimension = get_or(emb, "dimension", e.dimension);
  e.walk_length = get_or(emb, "walk_length", e.walk_length);
  e.walks_per_node = get_or(emb, "walks_per_node", e.walks_per_node);
  e.p = get_or(emb, "p", e.p);
  e.q = get_or(emb, "q", e.q);
  e.window = get_or(emb, "window", e.window);
  e.negatives = get_or(emb, "negatives", e.negatives);
  e.epochs = get_or(emb, "epochs", e.epochs);
  e.learning_rate = get_or(emb, "learning_rate", e.learning_rate);
  e.seed = get_or<std::uint64_t>(emb, "seed", c.seed);
  e.workers = get_or<unsigned>(emb, "workers", 1u);
  e.validate();
  if (emb.contains("operators")) {
    c.embedding_operators.clear();
    for (const auto& o : emb["operators"]) {
      auto parsed = parse_embedding_operator(o.get<std::string>());
      if (!parsed) throw InvalidArgument("config: unknown embedding operator " + o.get<std::string>());
      c.embedding_operators.push_back(*parsed);
    }
  }

  const json llm = j.value("llm", json::object());
  c.llm_backend = get_or<std::string>(llm, "backend", c.llm_backend);
  if (c.llm_backend != "mock" && c.llm_backend != "openai")
    throw InvalidArgument("config: llm.backend must be 'mock' or 'openai'");
  c.llm_base_url = get_or<std::string>(llm, "base_url", "");
  if (c.llm_backend == "openai" && c.llm_base_url.empty())
    throw InvalidArgument("config: llm.base_url is required for the openai backend");
  c.llm.model = get_or(llm, "model", c.llm.model);
  c.llm.requests_per_minute = get_or(llm, "requests_per_minute", c.llm.requests_per_minute);
  c.llm.concurrency = get_or(llm, "concurrency", c.llm.concurrency);
  c.llm.retry.max_attempts = get_or(llm, "retries", c.llm.retry.max_attempts);
  c.llm.retry.initial_backoff = std::chrono::milliseconds(get_or<long long>(llm, "backoff_ms", 2000));
  c.llm.cache_dir = c.cache_dir.empty() ? std::filesystem::path() : c.cache_dir / "llm";
  auto variant = parse_prompt_variant(get_or<std::string>(llm, "variant", "base"));
  if (!variant) throw InvalidArgument("config: unknown llm.variant");
  c.llm_variant = *variant;
  c.llm_max_pairs = get_or<std::size_t>(llm, "max_pairs", 0);

  const json cold = j.value("coldstart", json::object());
  c.coldstart_negatives_per_positive = get_or<std::size_t>(cold, "negatives_per_positive", 1);
  c.coldstart_llm = get_or(cold, "llm", true);

  const json oa = j.value("openalex", json::object());
  c.openalex_mailto = get_or<std::string>(oa, "mailto", "");
  c.openalex_rps = get_or(oa, "requests_per_second", c.openalex_rps);
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ParseError("config is not valid JSON: " + path.string());
  auto base = std::filesystem::absolute(path).parent_path();
  return from_json(j, base);
}

json RunConfig::to_json() const {
  json eras_j = json::array();
  for (const auto& e : eras) {
    json train = json::array();
    for (const auto& w : e.train_windows) train.push_back(year_range_json(w));
    eras_j.push_back({{"name", e.name}, {"train", train}, {"eval", year_range_json(e.eval_window)}});
  }
  json heur = json::array();
  for (auto h : heuristics) heur.push_back(to_string(h));
  json ops = json::array();
  for (auto o : embedding_operators) ops.push_back(to_string(o));
  return {
      {"paths",
       {{"edges", relative_to(edges, base_dir)},
        {"profiles", relative_to(profiles, base_dir)},
        {"cache", relative_to(cache_dir, base_dir)},
        {"out", relative_to(out_dir, base_dir)}}},
      {"year_range", year_range ? year_range_json(*year_range) : json(nullptr)},
      {"eras", eras_j},
      {"stats",
       {{"first_year", stats_first_year},
        {"last_year", stats_last_year},
        {"spike", boundaries.spike},
        {"decel", boundaries.decel}}},
      {"seed", seed},
      {"community", {{"seed", community_seed}, {"resolution", community_resolution}, {"top_k", top_communities}}},
      {"sampling", {{"natural_total", natural_total}, {"balanced_total", balanced_total}}},
      {"heuristics", heur},
      {"embedding",
       {{"dimension", embedding.dimension},
        {"walk_length", embedding.walk_length},
        {"walks_per_node", embedding.walks_per_node},
        {"p", embedding.p},
        {"q", embedding.q},
        {"window", embedding.window},
        {"negatives", embedding.negatives},
        {"epochs", embedding.epochs},
        {"learning_rate", embedding.learning_rate},
        {"seed", embedding.seed},
        {"workers", embedding.workers},
        {"operators", ops}}},
      {"llm",
       {{"backend", llm_backend},
        {"base_url", llm_base_url},
        {"model", llm.model},
        {"requests_per_minute", llm.requests_per_minute},
        {"concurrency", llm.concurrency},
        {"retries", llm.retry.max_attempts},
        {"backoff_ms", llm.retry.initial_backoff.count()},
        {"variant", to_string(llm_variant)},
        {"max_pairs", llm_max_pairs}}},
      {"coldstart", {{"negatives_per_positive", coldstart_negatives_per_positive}, {"llm", coldstart_llm}}},
      {"openalex", {{"mailto", openalex_mailto}, {"requests_per_second", openalex_rps}}},
  };
}

std::string RunConfig::hash() const { return hex64(fnv1a64(to_json().dump())); }

const EraConfig& RunConfig::era(const std::string& name) const {
  for (const auto& e : eras)
    if (e.name == name) return e;
  throw InvalidArgument("unknown era: " + name);
}

void RunConfig::validate_paths() const {
  if (edges.empty()) throw InvalidArgument("config: paths.edges is required");
  if (!std::filesystem::is_regular_file(edges)) throw InvalidArgument("edge file not found: " + edges.string());
  if (!profiles.empty() && !std::filesystem::is_regular_file(profiles))
    throw InvalidArgument("profile file not found: " + profiles.string());
  if (out_dir.empty()) throw InvalidArgument("config: paths.out is required");
}

}  // namespace coauthlp
