#include "coauthlp/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

#include "coauthlp/candidates.hpp"
#include "coauthlp/community.hpp"
#include "coauthlp/error.hpp"
#include "coauthlp/evaluation.hpp"
#include "coauthlp/hash.hpp"
#include "coauthlp/io.hpp"
#include "coauthlp/metadata.hpp"
#include "coauthlp/synthetic.hpp"
#include "coauthlp/text.hpp"

namespace coauthlp {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Ctx {
  const RunConfig& cfg;
  const RunFlags& flags;
  std::ostream& log;
  std::string command;
  std::string config_hash;

  std::string provenance() const {
    return fmt::format("{}; config={}; seed={}; command={}", kToolVersion, config_hash, cfg.seed, command);
  }
  json provenance_json() const {
    return {{"tool_version", kToolVersion}, {"config_hash", config_hash}, {"seed", cfg.seed}, {"command", command}};
  }
  fs::path out(const std::string& name) const { return cfg.out_dir / name; }
  fs::path era_path(const EraConfig& e, const std::string& name) const { return cfg.out_dir / e.name / name; }
};

void require(const fs::path& p, const std::string& producer) {
  if (!fs::exists(p)) throw MissingArtifact(p.string(), producer);
}

void write_table(const Ctx& ctx, const fs::path& path, const Table& t) {
  fs::create_directories(path.parent_path());
  std::ostringstream os;
  write_table_csv(os, t, ctx.provenance());
  write_file_atomic(path, os.str());
}

void write_json(const Ctx& ctx, const fs::path& path, json body) {
  fs::create_directories(path.parent_path());
  body["provenance"] = ctx.provenance_json();
  write_file_atomic(path, body.dump(2) + "\n");
}

template <class F>
void write_binary(const Ctx& ctx, const fs::path& path, F&& writer) {
  fs::create_directories(path.parent_path());
  std::ostringstream os;
  os << "# " << ctx.provenance() << '\n';
  writer(os);
  write_file_atomic(path, os.str());
}

std::ifstream open_binary(const fs::path& path, const std::string& producer) {
  require(path, producer);
  std::ifstream in(path, std::ios::binary);
  if (in.peek() == '#') {
    std::string header;
    std::getline(in, header);
  }
  return in;
}

Table read_table(const fs::path& path, const std::string& producer) {
  require(path, producer);
  std::ifstream in(path);
  Table t;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_csv(line);
    if (!have_header) {
      t.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size()) throw ParseError("column count mismatch in " + path.string(), lineno);
    t.rows.push_back(std::move(fields));
  }
  if (!have_header) throw ParseError("empty artifact " + path.string());
  return t;
}

json read_json(const fs::path& path, const std::string& producer) {
  require(path, producer);
  auto text = read_file(path);
  auto j = json::parse(text.value_or(""), nullptr, false);
  if (j.is_discarded()) throw ParseError("invalid JSON artifact " + path.string());
  return j;
}

std::size_t column(const Table& t, std::string_view name) {
  for (std::size_t i = 0; i < t.header.size(); ++i)
    if (t.header[i] == name) return i;
  throw ParseError(fmt::format("artifact lacks column '{}'", name));
}

std::optional<std::size_t> find_column(const Table& t, std::string_view name) {
  for (std::size_t i = 0; i < t.header.size(); ++i)
    if (t.header[i] == name) return i;
  return std::nullopt;
}

std::size_t to_index(const std::string& s) {
  auto v = parse_int(s);
  if (!v || *v < 0) throw ParseError("expected a non-negative integer, got '" + s + "'");
  return static_cast<std::size_t>(*v);
}

std::optional<double> to_value(const std::string& s) {
  if (s == "NA" || s.empty()) return std::nullopt;
  auto v = parse_double(s);
  if (!v) throw ParseError("expected a number, got '" + s + "'");
  return v;
}

std::string na(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

std::vector<const EraConfig*> selected_eras(const Ctx& ctx) {
  std::vector<const EraConfig*> out;
  if (!ctx.flags.era.empty()) {
    out.push_back(&ctx.cfg.era(ctx.flags.era));
  } else {
    for (const auto& e : ctx.cfg.eras) out.push_back(&e);
  }
  return out;
}

// --- loaders for upstream artifacts -------------------------------------------------

IngestResult load_edges(const Ctx& ctx) {
  auto path = ctx.out("edges.csv");
  require(path, "ingest");
  return ingest_edges(path);
}

std::optional<ProfileStore> load_profiles(const Ctx& ctx) {
  auto path = ctx.out("profiles.jsonl");
  if (!fs::exists(path)) return std::nullopt;
  return ingest_profiles(path).profiles;
}

ProfileStore require_profiles(const Ctx& ctx) {
  auto p = load_profiles(ctx);
  if (!p) throw MissingArtifact(ctx.out("profiles.jsonl").string(), "ingest (with paths.profiles set)");
  return std::move(*p);
}

GraphSnapshot load_snapshot(const Ctx& ctx, const EraConfig& era, const std::string& which) {
  auto in = open_binary(ctx.era_path(era, which + ".snap"), "split");
  return GraphSnapshot::read_binary(in);
}

CommunityAssignment load_assignment(const Ctx& ctx, const EraConfig& era, std::size_t id_space) {
  auto t = read_table(ctx.era_path(era, "communities.csv"), "communities");
  auto cn = column(t, "node");
  auto cc = column(t, "community");
  CommunityAssignment a;
  a.community_of.assign(id_space, kUnassigned);
  for (const auto& row : t.rows) {
    auto node = to_index(row[cn]);
    auto c = to_index(row[cc]);
    if (node >= id_space) throw ParseError("community node outside id space");
    a.community_of[node] = static_cast<CommunityId>(c);
    if (a.sizes.size() <= c) a.sizes.resize(c + 1, 0);
    ++a.sizes[c];
  }
  auto meta = read_json(ctx.era_path(era, "communities.json"), "communities");
  a.modularity = meta.value("modularity", 0.0);
  return a;
}

std::vector<NodeId> scope_members(const Ctx& ctx, const CommunityAssignment& a) {
  auto top = select_top_community(a, ctx.cfg.top_communities);
  std::vector<NodeId> members;
  for (const auto& m : top.members) members.insert(members.end(), m.begin(), m.end());
  std::sort(members.begin(), members.end());
  return members;
}

struct Candidates {
  std::vector<NodePair> pairs;
  std::vector<Label> labels;
};

Candidates load_candidates(const Ctx& ctx, const EraConfig& era) {
  auto t = read_table(ctx.era_path(era, "candidates.csv"), "candidates");
  auto cu = column(t, "u"), cv = column(t, "v"), cl = column(t, "label");
  Candidates c;
  c.pairs.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    c.pairs.emplace_back(static_cast<NodeId>(to_index(row[cu])), static_cast<NodeId>(to_index(row[cv])));
    c.labels.push_back(row[cl] == "1" ? 1 : 0);
  }
  return c;
}

EmbeddingTable load_embeddings(const Ctx& ctx, const EraConfig& era) {
  auto in = open_binary(ctx.era_path(era, "embeddings.bin"), "train-embeddings");
  return EmbeddingTable::read_binary(in);
}

const AuthorProfile* profile_of(const ProfileStore& store, const AuthorIndex& authors, NodeId u) {
  return store.find(authors.id_of(u));
}

std::unique_ptr<ChatBackend> make_backend(const RunConfig& cfg) {
  if (cfg.llm_backend == "mock") return std::make_unique<MockChatBackend>(cfg.seed);
  return std::make_unique<OpenAiChatBackend>(ChatEndpoint::from_env(cfg.llm_base_url),
                                             std::shared_ptr<HttpTransport>(make_http_transport()));
}

std::string window_label(const YearRange& w) { return fmt::format("{}-{}", w.first, w.last); }

// Training-era activity for era-restricted prompts: profile totals prorated by
// the share of the author's co-authorship weight that falls in the training windows.
struct EraScoper {
  const GraphSnapshot& train;
  GraphSnapshot full;
  EraScopedCounts operator()(const AuthorProfile& p, NodeId u) const {
    const double all = full.contains(u) ? static_cast<double>(full.strength(u)) : 0.0;
    const double share = all > 0 ? static_cast<double>(train.strength(u)) / all : 0.0;
    return {static_cast<std::uint64_t>(std::llround(static_cast<double>(p.works_count) * share)),
            static_cast<std::uint64_t>(std::llround(static_cast<double>(p.cited_by_count) * share)), p.institution};
  }
};

std::vector<LlmRequest> build_requests(const Ctx& ctx, const EraConfig& era, std::span<const NodePair> pairs,
                                       PromptVariant variant, const ProfileStore& profiles,
                                       const AuthorIndex& authors, const GraphSnapshot& train) {
  std::optional<EraScoper> scoper;
  if (variant == PromptVariant::EraRestricted) {
    auto edges = load_edges(ctx);
    auto span = edges.data.year_span();
    scoper.emplace(EraScoper{train, span ? build_snapshot(edges.data, *span) : GraphSnapshot{}});
  }
  std::vector<LlmRequest> requests;
  requests.reserve(pairs.size());
  for (auto [u, v] : pairs) {
    LlmRequest r{u, v, {}, {}};
    const auto* a = profile_of(profiles, authors, u);
    const auto* b = profile_of(profiles, authors, v);
    if (!a || !b) {
      r.error = "missing-profile";
    } else {
      PromptExtras extras;
      extras.eval_window = window_label(era.eval_window);
      if (variant == PromptVariant::PlusNetworkStats) {
        extras.adamic_adar = adamic_adar(train, u, v);
        extras.common_neighbors = common_neighbors(train, u, v);
      }
      if (scoper) {
        extras.era_a = (*scoper)(*a, u);
        extras.era_b = (*scoper)(*b, v);
      }
      r.prompt = build_prompt(*a, *b, variant, extras);
    }
    requests.push_back(std::move(r));
  }
  return requests;
}

// --- commands ------------------------------------------------------------------------

void cmd_ingest(const Ctx& ctx) {
  ctx.cfg.validate_paths();
  auto res = ingest_edges(ctx.cfg.edges, ctx.cfg.year_range);
  fs::create_directories(ctx.cfg.out_dir);
  {
    std::ostringstream os;
    os << "# " << ctx.provenance() << '\n';
    export_edges_csv(res.data, os);
    write_file_atomic(ctx.out("edges.csv"), os.str());
  }
  json report = {{"rows_read", res.report.rows_read},
                 {"rows_accepted", res.report.rows_accepted},
                 {"self_loops", res.report.self_loops},
                 {"out_of_range", res.report.out_of_range},
                 {"duplicates_merged", res.report.duplicates_merged},
                 {"authors", res.data.authors.size()},
                 {"edges", res.data.edges.size()}};
  if (auto span = res.data.year_span()) report["year_span"] = {span->first, span->last};
  if (!ctx.cfg.profiles.empty()) {
    auto prof = ingest_profiles(ctx.cfg.profiles);
    for (const auto& w : prof.warnings) ctx.log << "warning: " << w << '\n';
    std::ostringstream os;
    os << "# " << ctx.provenance() << '\n';
    write_profiles_jsonl(prof.profiles, os);
    write_file_atomic(ctx.out("profiles.jsonl"), os.str());
    std::size_t without = 0;
    for (const auto& id : res.data.authors.ids())
      if (!prof.profiles.find(id)) ++without;
    report["profiles"] = prof.profiles.size();
    report["profile_warnings"] = prof.warnings;
    report["authors_without_profile"] = without;
  } else {
    fs::remove(ctx.out("profiles.jsonl"));
  }
  write_json(ctx, ctx.out("ingest.json"), report);
  ctx.log << fmt::format("ingest: {} rows -> {} edges over {} authors\n", res.report.rows_read,
                         res.data.edges.size(), res.data.authors.size());
}

void cmd_stats(const Ctx& ctx) {
  auto edges = load_edges(ctx);
  auto windows = two_year_windows(ctx.cfg.stats_first_year, ctx.cfg.stats_last_year);
  auto stats = window_stats(edges.data, windows);
  Table t{{"window", "authors", "edges", "avg_degree", "edge_growth", "author_growth", "edges_per_author"}, {}};
  for (const auto& s : stats)
    t.rows.push_back({window_label(s.window), std::to_string(s.authors), std::to_string(s.edges),
                      format_number(s.avg_degree), na(s.edge_growth), na(s.author_growth),
                      format_number(s.edges_per_author)});
  write_table(ctx, ctx.out("window_stats.csv"), t);
  Table b{{"before_window", "kind", "edge_growth", "author_growth"}, {}};
  if (stats.size() >= 2) {
    for (const auto& x : detect_boundaries(stats, ctx.cfg.boundaries))
      b.rows.push_back({window_label(stats[x.before_window].window),
                        x.kind == BoundaryKind::Spike ? "spike" : "deceleration", format_number(x.edge_growth),
                        format_number(x.author_growth)});
  }
  write_table(ctx, ctx.out("boundaries.csv"), b);
  ctx.log << fmt::format("stats: {} windows, {} boundaries\n", stats.size(), b.rows.size());
}

void cmd_split(const Ctx& ctx) {
  auto edges = load_edges(ctx);
  for (const auto* era : selected_eras(ctx)) {
    era->validate();
    auto train = build_snapshot(edges.data, era->train_windows);
    auto eval = build_snapshot(edges.data, era->eval_window);
    write_binary(ctx, ctx.era_path(*era, "train.snap"), [&](std::ostream& o) { train.write_binary(o); });
    write_binary(ctx, ctx.era_path(*era, "eval.snap"), [&](std::ostream& o) { eval.write_binary(o); });
    auto cls = classify_edges(train, eval);
    Table t{{"u", "v", "src", "dst", "class"}, {}};
    t.rows.reserve(cls.edges.size());
    for (const auto& e : cls.edges)
      t.rows.push_back({std::to_string(e.u), std::to_string(e.v), edges.data.authors.id_of(e.u),
                        edges.data.authors.id_of(e.v), to_string(e.cls)});
    write_table(ctx, ctx.era_path(*era, "edge_classes.csv"), t);
    write_json(ctx, ctx.era_path(*era, "split.json"),
               {{"era", era->name},
                {"train", {{"nodes", train.node_count()}, {"edges", train.edge_count()}}},
                {"eval", {{"nodes", eval.node_count()}, {"edges", eval.edge_count()}}},
                {"continued", cls.continued},
                {"new", cls.added},
                {"dropped", cls.dropped}});
    ctx.log << fmt::format("split {}: train {} edges, eval {} edges; continued {}, new {}, dropped {}\n", era->name,
                           train.edge_count(), eval.edge_count(), cls.continued, cls.added, cls.dropped);
  }
}

void cmd_communities(const Ctx& ctx) {
  auto edges = load_edges(ctx);
  for (const auto* era : selected_eras(ctx)) {
    auto train = load_snapshot(ctx, *era, "train");
    if (train.edge_count() == 0) throw InvalidArgument(fmt::format("era {}: training graph has no edges", era->name));
    LouvainOptions opts;
    opts.seed = ctx.cfg.community_seed;
    opts.resolution = ctx.cfg.community_resolution;
    auto a = louvain(train, opts);
    Table t{{"node", "author", "community"}, {}};
    for (NodeId u = 0; u < a.community_of.size(); ++u)
      if (a.community_of[u] != kUnassigned)
        t.rows.push_back({std::to_string(u), edges.data.authors.id_of(u), std::to_string(a.community_of[u])});
    write_table(ctx, ctx.era_path(*era, "communities.csv"), t);
    auto top = select_top_community(a, ctx.cfg.top_communities);
    json top_j = json::array();
    std::size_t scope = 0;
    for (std::size_t i = 0; i < top.ids.size(); ++i) {
      top_j.push_back({{"community", top.ids[i]}, {"size", top.members[i].size()}});
      scope += top.members[i].size();
    }
    write_json(ctx, ctx.era_path(*era, "communities.json"),
               {{"modularity", a.modularity},
                {"level_modularity", a.level_modularity},
                {"community_count", a.community_count()},
                {"top", top_j},
                {"scope_nodes", scope},
                {"truncated", top.truncated}});
    ctx.log << fmt::format("communities {}: {} communities, Q = {:.4f}, scope {} authors\n", era->name,
                           a.community_count(), a.modularity, scope);
  }
}

void cmd_candidates(const Ctx& ctx) {
  auto edges = load_edges(ctx);
  for (const auto* era : selected_eras(ctx)) {
    auto train = load_snapshot(ctx, *era, "train");
    auto eval = load_snapshot(ctx, *era, "eval");
    auto a = load_assignment(ctx, *era, train.id_space());
    auto members = scope_members(ctx, a);
    NodeScope scope(train.id_space(), members);
    std::vector<NodePair> new_in_scope;
    std::unordered_set<std::uint64_t> positives;
    for (auto [u, v] : classify_edges(train, eval).pairs_of(EdgeClass::New)) {
      if (!scope.contains(u) || !scope.contains(v)) continue;
      new_in_scope.emplace_back(u, v);
      positives.insert(pair_key(u, v));
    }
    auto cands = generate_candidates(train, scope, positives, ctx.cfg.workers);
    Table t{{"u", "v", "src", "dst", "cn", "label"}, {}};
    t.rows.reserve(cands.size());
    std::size_t pos = 0;
    for (const auto& c : cands) {
      pos += c.positive ? 1 : 0;
      t.rows.push_back({std::to_string(c.u), std::to_string(c.v), edges.data.authors.id_of(c.u),
                        edges.data.authors.id_of(c.v), std::to_string(c.common_neighbors), c.positive ? "1" : "0"});
    }
    write_table(ctx, ctx.era_path(*era, "candidates.csv"), t);
    json meta = {{"scope_nodes", members.size()},
                 {"candidates", cands.size()},
                 {"positives_in_pool", pos},
                 {"new_edges_in_scope", new_in_scope.size()}};
    if (!new_in_scope.empty()) {
      const double ceiling = recall_ceiling(train, new_in_scope);
      meta["recall_ceiling"] = ceiling;
      meta["cold_fraction"] = 1.0 - ceiling;
    } else {
      meta["recall_ceiling"] = nullptr;
      meta["cold_fraction"] = nullptr;
    }
    write_json(ctx, ctx.era_path(*era, "candidates.json"), meta);
    ctx.log << fmt::format("candidates {}: {} pairs ({} positive) from {} scoped authors\n", era->name, cands.size(),
                           pos, members.size());
  }
}

void cmd_train_embeddings(const Ctx& ctx) {
  auto edges = load_edges(ctx);
  const bool want_csv =
      std::find(ctx.flags.methods.begin(), ctx.flags.methods.end(), "csv") != ctx.flags.methods.end();
  for (const auto* era : selected_eras(ctx)) {
    auto train = load_snapshot(ctx, *era, "train");
    auto corpus = generate_walks(train, ctx.cfg.embedding);
    auto table = train_skipgram(corpus, train.id_space(), ctx.cfg.embedding);
    write_binary(ctx, ctx.era_path(*era, "embeddings.bin"), [&](std::ostream& o) { table.write_binary(o); });
    if (want_csv) {
      std::ostringstream os;
      os << "# " << ctx.provenance() << '\n';
      table.write_csv(os, edges.data.authors);
      write_file_atomic(ctx.era_path(*era, "embeddings.csv"), os.str());
    }
    json sweep = json::array();
    for (auto [p, q] : default_pq_sweep()) sweep.push_back({{"p", p}, {"q", q}});
    write_json(ctx, ctx.era_path(*era, "embeddings.json"),
               {{"nodes", table.size()},
                {"dimension", table.dimension()},
                {"walks", corpus.walk_count()},
                {"corpus_tokens", table.corpus_tokens},
                {"config_fingerprint", hex64(table.config_fingerprint)},
                {"p", ctx.cfg.embedding.p},
                {"q", ctx.cfg.embedding.q},
                {"pq_sweep", sweep}});
    ctx.log << fmt::format("train-embeddings {}: {} nodes, {} walks, {} tokens\n", era->name, table.size(),
                           corpus.walk_count(), table.corpus_tokens);
  }
}

void score_heuristics(const Ctx& ctx, const EraConfig& era, const Candidates& c) {
  auto train = load_snapshot(ctx, era, "train");
  std::vector<Heuristic> methods = ctx.cfg.heuristics;
  if (std::find(methods.begin(), methods.end(), Heuristic::Random) == methods.end())
    methods.push_back(Heuristic::Random);
  methods.erase(std::remove(methods.begin(), methods.end(), Heuristic::EdgeWeight), methods.end());
  auto scores = score_batch(train, c.pairs, methods, derive_seed(ctx.cfg.seed, 0x4a11), ctx.cfg.workers);
  Table t{{"u", "v", "label"}, {}};
  for (auto m : methods) t.header.push_back(to_string(m));
  t.rows.reserve(c.pairs.size());
  for (std::size_t i = 0; i < c.pairs.size(); ++i) {
    std::vector<std::string> row{std::to_string(c.pairs[i].first), std::to_string(c.pairs[i].second),
                                 std::to_string(c.labels[i])};
    for (std::size_t m = 0; m < methods.size(); ++m) row.push_back(format_number(scores[i * methods.size() + m].value));
    t.rows.push_back(std::move(row));
  }
  write_table(ctx, ctx.era_path(era, "scores_heuristics.csv"), t);
}

std::vector<std::string> embedding_columns(const RunConfig& cfg) {
  std::vector<std::string> out;
  for (auto op : cfg.embedding_operators) out.push_back(std::string("n2v_") + to_string(op));
  return out;
}

void score_embeddings(const Ctx& ctx, const EraConfig& era, const Candidates& c) {
  auto table = load_embeddings(ctx, era);
  Table t{{"u", "v", "label"}, {}};
  for (const auto& col : embedding_columns(ctx.cfg)) t.header.push_back(col);
  for (std::size_t i = 0; i < c.pairs.size(); ++i) {
    auto [u, v] = c.pairs[i];
    std::vector<std::string> row{std::to_string(u), std::to_string(v), std::to_string(c.labels[i])};
    for (auto op : ctx.cfg.embedding_operators)
      row.push_back(table.has(u) && table.has(v) ? format_number(score_pair_embedding(table, u, v, op)) : "NA");
    t.rows.push_back(std::move(row));
  }
  write_table(ctx, ctx.era_path(era, "scores_embeddings.csv"), t);
}

std::vector<std::string> metadata_row(const PairFeatureVector& f) {
  std::vector<std::string> row;
  for (const auto& name : feature_names()) row.push_back(na(feature_value(f, name)));
  return row;
}

void score_metadata(const Ctx& ctx, const EraConfig& era, const Candidates& c, const AuthorIndex& authors) {
  auto profiles = require_profiles(ctx);
  Table t{{"u", "v", "label"}, {}};
  for (const auto& name : feature_names()) t.header.push_back(name);
  for (std::size_t i = 0; i < c.pairs.size(); ++i) {
    auto [u, v] = c.pairs[i];
    std::vector<std::string> row{std::to_string(u), std::to_string(v), std::to_string(c.labels[i])};
    auto f = pair_features(profile_of(profiles, authors, u), profile_of(profiles, authors, v));
    for (auto& cell : metadata_row(f)) row.push_back(std::move(cell));
    t.rows.push_back(std::move(row));
  }
  write_table(ctx, ctx.era_path(era, "scores_metadata.csv"), t);
}

void cmd_score(const Ctx& ctx) {
  std::vector<std::string> methods = ctx.flags.methods;
  if (methods.empty()) methods = {"heuristics", "embeddings", "metadata"};
  for (const auto& m : methods)
    if (m != "heuristics" && m != "embeddings" && m != "metadata")
      throw InvalidArgument("score: unknown method family '" + m + "' (heuristics, embeddings, metadata)");
  auto edges = load_edges(ctx);
  for (const auto* era : selected_eras(ctx)) {
    auto c = load_candidates(ctx, *era);
    for (const auto& m : methods) {
      if (m == "heuristics") score_heuristics(ctx, *era, c);
      if (m == "embeddings") score_embeddings(ctx, *era, c);
      if (m == "metadata") score_metadata(ctx, *era, c, edges.data.authors);
    }
    ctx.log << fmt::format("score {}: {} pairs with {}\n", era->name, c.pairs.size(),
                           fmt::join(methods, ", "));
  }
}

json sample_json(const SampleResult& r, const SamplePlan& plan, std::span<const Label> labels) {
  std::size_t pos = 0;
  for (auto i : r.indices) pos += labels[i];
  std::size_t pool_pos = 0;
  for (auto l : labels) pool_pos += l;
  json strata = json::array();
  for (const auto& s : r.strata)
    strata.push_back({{"group", s.group},
                      {"stratum", s.stratum},
                      {"available", s.available},
                      {"quota", s.quota},
                      {"drawn", s.drawn}});
  return {{"mode", to_string(plan.mode)},
          {"seed", plan.seed},
          {"requested", plan.total},
          {"drawn", r.indices.size()},
          {"positives", pos},
          {"negatives", r.indices.size() - pos},
          {"pool", labels.size()},
          {"pool_positives", pool_pos},
          {"shortfall_filled", r.shortfall_filled},
          {"warnings", r.warnings},
          {"strata", strata}};
}

void cmd_sample(const Ctx& ctx) {
  for (const auto* era : selected_eras(ctx)) {
    auto t = read_table(ctx.era_path(*era, "scores_heuristics.csv"), "score");
    auto aa_col = find_column(t, "AA");
    if (!aa_col) throw InvalidArgument("sample: AA scores are required; include AA in the heuristics list");
    auto lc = column(t, "label");
    std::vector<double> aa;
    std::vector<Label> labels;
    for (const auto& row : t.rows) {
      aa.push_back(to_value(row[*aa_col]).value_or(0.0));
      labels.push_back(row[lc] == "1" ? 1 : 0);
    }
    json meta = json::object();
    for (auto plan : {SamplePlan::natural(derive_seed(ctx.cfg.seed, 0x5a1), ctx.cfg.natural_total),
                      SamplePlan::balanced(derive_seed(ctx.cfg.seed, 0x5a2), ctx.cfg.balanced_total)}) {
      auto r = stratified_sample(aa, labels, plan);
      for (const auto& w : r.warnings) ctx.log << "warning: " << era->name << ' ' << to_string(plan.mode) << ": " << w << '\n';
      Table s{{"row", "u", "v", "label", "AA"}, {}};
      for (auto i : r.indices)
        s.rows.push_back({std::to_string(i), t.rows[i][0], t.rows[i][1], t.rows[i][lc], t.rows[i][*aa_col]});
      write_table(ctx, ctx.era_path(*era, fmt::format("sample_{}.csv", to_string(plan.mode))), s);
      meta[to_string(plan.mode)] = sample_json(r, plan, labels);
      ctx.log << fmt::format("sample {} {}: {} pairs\n", era->name, to_string(plan.mode), r.indices.size());
    }
    write_json(ctx, ctx.era_path(*era, "sample.json"), meta);
  }
}

std::vector<std::size_t> sampled_rows(const Ctx& ctx, const EraConfig& era) {
  std::vector<std::size_t> rows;
  for (const char* mode : {"natural", "balanced"}) {
    auto t = read_table(ctx.era_path(era, fmt::format("sample_{}.csv", mode)), "sample");
    auto rc = column(t, "row");
    for (const auto& r : t.rows) rows.push_back(to_index(r[rc]));
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return rows;
}

PromptVariant variant_of(const Ctx& ctx) { return ctx.flags.variant.value_or(ctx.cfg.llm_variant); }

void cmd_llm(const Ctx& ctx) {
  auto edges = load_edges(ctx);
  auto profiles = require_profiles(ctx);
  const auto variant = variant_of(ctx);
  auto backend = make_backend(ctx.cfg);
  for (const auto* era : selected_eras(ctx)) {
    auto rows = sampled_rows(ctx, *era);
    if (ctx.cfg.llm_max_pairs && rows.size() > ctx.cfg.llm_max_pairs) rows.resize(ctx.cfg.llm_max_pairs);
    auto c = load_candidates(ctx, *era);
    auto train = load_snapshot(ctx, *era, "train");
    std::vector<NodePair> pairs;
    for (auto r : rows) {
      if (r >= c.pairs.size()) throw ParseError("sample row outside candidate table; rerun sample");
      pairs.push_back(c.pairs[r]);
    }
    auto requests = build_requests(ctx, *era, pairs, variant, profiles, edges.data.authors, train);
    auto results = predict(requests, variant, *backend, ctx.cfg.llm);
    Table t{{"row", "u", "v", "label", "collaborate", "probability", "error"}, {}};
    std::size_t ok = 0, cached = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& r = results[i];
      const auto& p = r.prediction;
      ok += p ? 1 : 0;
      cached += p && p->cached ? 1 : 0;
      t.rows.push_back({std::to_string(rows[i]), std::to_string(r.u), std::to_string(r.v),
                        std::to_string(c.labels[rows[i]]), p ? (p->collaborate ? "yes" : "no") : "NA",
                        p ? format_number(p->probability) : "NA", r.error});
    }
    write_table(ctx, ctx.era_path(*era, fmt::format("llm_{}.csv", to_string(variant))), t);
    ctx.log << fmt::format("llm {} ({}): {} predictions, {} errors, {} from cache\n", era->name, to_string(variant),
                           ok, results.size() - ok, cached);
  }
}

void cmd_coldstart(const Ctx& ctx) {
  auto edges = load_edges(ctx);
  auto profiles = load_profiles(ctx);
  for (const auto* era : selected_eras(ctx)) {
    auto train = load_snapshot(ctx, *era, "train");
    auto eval = load_snapshot(ctx, *era, "eval");
    auto a = load_assignment(ctx, *era, train.id_space());
    // Every new edge between authors already active in training.
    std::vector<NodePair> new_edges;
    for (auto [u, v] : classify_edges(train, eval).pairs_of(EdgeClass::New))
      if (train.active(u) && train.active(v)) new_edges.emplace_back(u, v);
    auto bins = default_degree_bins();
    auto top_k = default_top_k();
    auto stats = cold_start_profile(train, new_edges, bins, top_k, a);

    Table deg{{"degree_bin", "new_edges", "cold", "cold_rate"}, {}};
    for (const auto& b : stats.cold_rate_by_degree_bin)
      deg.rows.push_back({b.bin.label(), std::to_string(b.total), std::to_string(b.cold), na(b.rate)});
    write_table(ctx, ctx.era_path(*era, "fig_coldstart_degree.csv"), deg);
    Table topk{{"k", "new_edges", "cold", "cold_rate"}, {}};
    for (const auto& r : stats.top_k_sweep)
      topk.rows.push_back({std::to_string(r.k), std::to_string(r.new_edges), std::to_string(r.cold_count),
                           na(r.cold_rate)});
    write_table(ctx, ctx.era_path(*era, "fig_coldstart_topk.csv"), topk);
    Table paths{{"distance", "cold_pairs"}, {}};
    for (auto [d, n] : stats.path_length_histogram)
      paths.rows.push_back({d == kUnreachable ? "inf" : std::to_string(d), std::to_string(n)});
    write_table(ctx, ctx.era_path(*era, "fig_coldstart_paths.csv"), paths);
    write_json(ctx, ctx.era_path(*era, "coldstart.json"),
               {{"new_edges", stats.new_edges},
                {"two_hop", stats.two_hop},
                {"cold", stats.cold},
                {"recall_ceiling", stats.ceiling},
                {"cold_fraction", stats.new_edges ? json(1.0 - stats.ceiling) : json(nullptr)},
                {"unbinned", stats.unbinned},
                {"median_cold_distance", stats.median_cold_distance ? json(*stats.median_cold_distance) : json(nullptr)},
                {"cross_community_rate_cold",
                 stats.cross_community_rate_cold ? json(*stats.cross_community_rate_cold) : json(nullptr)},
                {"cross_community_rate_two_hop",
                 stats.cross_community_rate_two_hop ? json(*stats.cross_community_rate_two_hop) : json(nullptr)}});

    // Cold positives against sampled cold negatives, scored by every available method.
    auto part = partition_cold_start(train, new_edges);
    std::unordered_set<std::uint64_t> exclude;
    eval.for_each_edge([&](NodeId u, NodeId v, Weight) { exclude.insert(pair_key(u, v)); });
    auto negatives = sample_cold_negatives(train, train.active_nodes(),
                                           part.cold.size() * ctx.cfg.coldstart_negatives_per_positive,
                                           derive_seed(ctx.cfg.seed, 0xc01d), exclude);
    std::vector<NodePair> pairs = part.cold;
    std::vector<Label> labels(part.cold.size(), 1);
    pairs.insert(pairs.end(), negatives.begin(), negatives.end());
    labels.resize(pairs.size(), 0);

    Table t{{"u", "v", "label", "CN", "JC", "AA", "RA"}, {}};
    std::optional<EmbeddingTable> emb;
    if (fs::exists(ctx.era_path(*era, "embeddings.bin"))) {
      emb = load_embeddings(ctx, *era);
      for (const auto& col : embedding_columns(ctx.cfg)) t.header.push_back(col);
    }
    if (profiles)
      for (const auto& name : feature_names()) t.header.push_back(name);
    std::vector<LlmResult> llm;
    if (profiles && ctx.cfg.coldstart_llm && !pairs.empty()) {
      auto backend = make_backend(ctx.cfg);
      auto requests = build_requests(ctx, *era, pairs, variant_of(ctx), *profiles, edges.data.authors, train);
      llm = predict(requests, variant_of(ctx), *backend, ctx.cfg.llm);
      t.header.push_back("llm_probability");
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      auto [u, v] = pairs[i];
      std::vector<std::string> row{std::to_string(u), std::to_string(v), std::to_string(labels[i]),
                                   format_number(common_neighbors(train, u, v)),
                                   format_number(jaccard(train, u, v)), format_number(adamic_adar(train, u, v)),
                                   format_number(resource_allocation(train, u, v))};
      if (emb)
        for (auto op : ctx.cfg.embedding_operators)
          row.push_back(emb->has(u) && emb->has(v) ? format_number(score_pair_embedding(*emb, u, v, op)) : "NA");
      if (profiles) {
        auto f = pair_features(profile_of(*profiles, edges.data.authors, u), profile_of(*profiles, edges.data.authors, v));
        for (auto& cell : metadata_row(f)) row.push_back(std::move(cell));
      }
      if (!llm.empty()) row.push_back(llm[i].prediction ? format_number(llm[i].prediction->probability) : "NA");
      t.rows.push_back(std::move(row));
    }
    write_table(ctx, ctx.era_path(*era, "coldstart_scores.csv"), t);
    ctx.log << fmt::format("coldstart {}: {} new edges, {} cold ({} scored pairs)\n", era->name, stats.new_edges,
                           stats.cold, pairs.size());
  }
}

// --- evaluation ----------------------------------------------------------------------

// Score columns over candidate rows keyed by method name, in report order.
struct ScoreColumns {
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::optional<double>>> values;

  void add_table(const Table& t, std::size_t rows, const std::string& prefix = {}) {
    if (t.rows.size() != rows) throw ParseError("score table row count differs from candidates; rerun score");
    for (std::size_t c = 0; c < t.header.size(); ++c) {
      const auto& h = t.header[c];
      if (h == "u" || h == "v" || h == "label" || h == "row") continue;
      auto name = prefix + h;
      std::vector<std::optional<double>> col(rows);
      for (std::size_t r = 0; r < rows; ++r) col[r] = to_value(t.rows[r][c]);
      order.push_back(name);
      values[name] = std::move(col);
    }
  }
};

struct Subset {
  std::vector<double> scores;
  std::vector<Label> labels;
  std::vector<std::size_t> rows;
};

Subset present(const std::vector<std::optional<double>>& col, std::span<const Label> labels,
               std::span<const std::size_t> rows) {
  Subset s;
  for (auto r : rows)
    if (col[r]) {
      s.scores.push_back(*col[r]);
      s.labels.push_back(labels[r]);
      s.rows.push_back(r);
    }
  return s;
}

MethodMetrics metrics_for(const std::string& name, const Subset& s) {
  MethodMetrics m;
  m.method = name;
  try {
    m.auroc = auroc(s.scores, s.labels);
  } catch (const InvalidArgument& e) {
    m.note = fmt::format("{} ({} scored pairs)", e.what(), s.scores.size());
  }
  return m;
}

std::vector<std::size_t> rows_of_sample(const Ctx& ctx, const EraConfig& era, const char* mode) {
  auto t = read_table(ctx.era_path(era, fmt::format("sample_{}.csv", mode)), "sample");
  auto rc = column(t, "row");
  std::vector<std::size_t> rows;
  for (const auto& r : t.rows) rows.push_back(to_index(r[rc]));
  return rows;
}

SampleMeta sample_meta(const json& j) {
  SampleMeta m;
  m.mode = j.at("mode").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.requested = j.at("requested").get<std::size_t>();
  m.drawn = j.at("drawn").get<std::size_t>();
  m.positives = j.at("positives").get<std::size_t>();
  m.negatives = j.at("negatives").get<std::size_t>();
  m.pool = j.at("pool").get<std::size_t>();
  m.pool_positives = j.at("pool_positives").get<std::size_t>();
  m.shortfall_filled = j.at("shortfall_filled").get<std::size_t>();
  m.warnings = j.at("warnings").get<std::vector<std::string>>();
  return m;
}

std::string auroc_cell(const MethodMetrics& m) { return m.auroc ? format_number(*m.auroc) : "NA"; }

void cmd_evaluate(const Ctx& ctx) {
  auto edges = load_edges(ctx);
  const auto variant = variant_of(ctx);
  const std::string llm_name = std::string("LLM:") + to_string(variant);
  for (const auto* era : selected_eras(ctx)) {
    const auto heur_path = ctx.era_path(*era, "scores_heuristics.csv");
    require(heur_path, "score");
    auto c = load_candidates(ctx, *era);
    const std::size_t n = c.pairs.size();

    ScoreColumns cols;
    cols.add_table(read_table(heur_path, "score"), n);
    if (fs::exists(ctx.era_path(*era, "scores_embeddings.csv")))
      cols.add_table(read_table(ctx.era_path(*era, "scores_embeddings.csv"), "score"), n);
    std::optional<Table> meta_table;
    if (fs::exists(ctx.era_path(*era, "scores_metadata.csv"))) {
      meta_table = read_table(ctx.era_path(*era, "scores_metadata.csv"), "score");
      cols.add_table(*meta_table, n, "meta:");
    }
    const auto natural = rows_of_sample(ctx, *era, "natural");
    const auto balanced = rows_of_sample(ctx, *era, "balanced");

    // LLM probabilities, keyed back onto candidate rows.
    std::vector<std::optional<double>> llm(n);
    bool have_llm = false;
    if (auto p = ctx.era_path(*era, fmt::format("llm_{}.csv", to_string(variant))); fs::exists(p)) {
      auto t = read_table(p, "llm");
      auto rc = column(t, "row"), pc = column(t, "probability");
      for (const auto& r : t.rows) llm.at(to_index(r[rc])) = to_value(r[pc]);
      have_llm = true;
      cols.order.push_back(llm_name);
      cols.values[llm_name] = llm;
    }

    EvalReport report;
    report.era = era->name;
    auto sample_info = read_json(ctx.era_path(*era, "sample.json"), "sample");
    report.sample = sample_meta(sample_info.at("natural"));
    report.provenance = ctx.provenance_json();
    report.provenance["era"] = era->name;
    report.provenance["sample_seed_natural"] = sample_info["natural"]["seed"];
    report.provenance["sample_seed_balanced"] = sample_info["balanced"]["seed"];
    report.provenance["llm_model"] = ctx.cfg.llm.model;
    report.provenance["llm_variant"] = to_string(variant);
    report.provenance["llm_backend"] = ctx.cfg.llm_backend;
    json sweep = json::array();
    for (auto [p, q] : default_pq_sweep()) sweep.push_back({{"p", p}, {"q", q}});
    report.provenance["pq_sweep"] = sweep;
    if (auto p = ctx.era_path(*era, "embeddings.json"); fs::exists(p))
      report.provenance["embedding_fingerprint"] = read_json(p, "train-embeddings").value("config_fingerprint", "");

    Table heur{{"method", "natural_auroc", "natural_pairs", "balanced_auroc", "balanced_pairs"}, {}};
    for (const auto& name : cols.order) {
      auto nat = present(cols.values[name], c.labels, natural);
      auto bal = present(cols.values[name], c.labels, balanced);
      auto m = metrics_for(name, nat);
      auto mb = metrics_for(name, bal);
      if (name == "AA") {
        std::vector<double> pos;
        for (std::size_t i = 0; i < nat.scores.size(); ++i)
          if (nat.labels[i]) pos.push_back(nat.scores[i]);
        if (!pos.empty()) {
          std::sort(pos.begin(), pos.end());
          const auto k = pos.size() / 2;
          m.threshold = pos.size() % 2 ? pos[k] : (pos[k - 1] + pos[k]) / 2;
        }
      } else if (name == llm_name) {
        m.threshold = 0.5;
      }
      if (m.threshold) {
        try {
          m.at_threshold = recall_precision(nat.scores, nat.labels, *m.threshold);
        } catch (const InvalidArgument&) {
        }
      }
      heur.rows.push_back({name, auroc_cell(m), std::to_string(nat.scores.size()), auroc_cell(mb),
                           std::to_string(bal.scores.size())});
      report.methods.push_back(std::move(m));
    }
    report.tables["method_auroc"] = heur;

    auto balanced_meta = sample_meta(sample_info.at("balanced"));
    report.tables["class_balance"] = Table{
        {"sample", "pairs", "positives", "negatives", "pool", "pool_positives"},
        {{"natural", std::to_string(report.sample.drawn), std::to_string(report.sample.positives),
          std::to_string(report.sample.negatives), std::to_string(report.sample.pool),
          std::to_string(report.sample.pool_positives)},
         {"balanced", std::to_string(balanced_meta.drawn), std::to_string(balanced_meta.positives),
          std::to_string(balanced_meta.negatives), std::to_string(balanced_meta.pool),
          std::to_string(balanced_meta.pool_positives)}}};

    const auto& aa_col = cols.values.at("AA");
    if (have_llm) {
      Subset s;
      for (auto r : natural)
        if (llm[r] && aa_col[r]) {
          s.rows.push_back(r);
          s.scores.push_back(*aa_col[r]);
          s.labels.push_back(c.labels[r]);
        }
      std::vector<double> probs;
      std::vector<Label> verdicts;
      for (auto r : s.rows) {
        probs.push_back(*llm[r]);
        verdicts.push_back(*llm[r] >= 0.5 ? 1 : 0);
      }
      report.calibration = calibration_by_decile(s.scores, verdicts, s.labels);
      try {
        report.spearman["AA~" + llm_name] = spearman(s.scores, probs);
      } catch (const InvalidArgument& e) {
        ctx.log << "note: " << era->name << " spearman skipped: " << e.what() << '\n';
      }
      if (std::find(s.labels.begin(), s.labels.end(), Label{1}) != s.labels.end()) {
        auto q = agreement_quadrants(s.scores, probs, s.labels);
        report.quadrants = q.counts;
        report.quadrant_positives = static_cast<std::size_t>(std::count(s.labels.begin(), s.labels.end(), Label{1}));
      }
    }
    if (cols.values.count("RA")) {
      auto s = present(cols.values.at("RA"), c.labels, natural);
      std::vector<double> aa;
      for (auto r : s.rows) aa.push_back(aa_col[r].value_or(0.0));
      try {
        report.spearman["AA~RA"] = spearman(aa, s.scores);
      } catch (const InvalidArgument&) {
      }
    }

    // Homophily and socio-cultural AUROC over the whole candidate pool.
    if (meta_table) {
      std::vector<PairFeatureVector> features(n);
      std::vector<std::size_t> all(n);
      std::iota(all.begin(), all.end(), 0);
      Table fa{{"feature", "pairs", "auroc", "note"}, {}};
      for (const auto& name : feature_names()) {
        const auto& col = cols.values.at("meta:" + name);
        if (name.starts_with("same_")) {
          std::vector<std::optional<int>> same(n);
          for (std::size_t r = 0; r < n; ++r)
            if (col[r]) same[r] = static_cast<int>(*col[r]);
          try {
            report.homophily.push_back(homophily_ratio(same, c.labels, name));
          } catch (const InvalidArgument&) {
            HomophilyRow row;
            row.feature = name;
            report.homophily.push_back(row);
          }
        }
        auto m = metrics_for(name, present(col, c.labels, all));
        fa.rows.push_back({name, std::to_string(present(col, c.labels, all).scores.size()), auroc_cell(m), m.note});
      }
      report.tables["feature_auroc"] = fa;
    }

    // Edge-type breakdown: continued edges (train edges inside the scope that persist).
    auto train = load_snapshot(ctx, *era, "train");
    auto eval = load_snapshot(ctx, *era, "eval");
    auto a = load_assignment(ctx, *era, train.id_space());
    NodeScope scope(train.id_space(), scope_members(ctx, a));
    std::vector<NodePair> tpairs;
    std::vector<Label> tlabels;
    train.for_each_edge([&](NodeId u, NodeId v, Weight) {
      if (!scope.contains(u) || !scope.contains(v)) return;
      tpairs.emplace_back(u, v);
      tlabels.push_back(eval.has_edge(u, v) ? 1 : 0);
    });
    std::map<std::string, MethodMetrics> continued;
    {
      std::vector<Heuristic> hs = {Heuristic::EdgeWeight, Heuristic::CN, Heuristic::JC, Heuristic::AA,
                                   Heuristic::PA,         Heuristic::RA, Heuristic::Random};
      auto scores = score_batch(train, tpairs, hs, derive_seed(ctx.cfg.seed, 0xc0de), ctx.cfg.workers);
      for (std::size_t m = 0; m < hs.size(); ++m) {
        Subset s;
        s.labels = tlabels;
        for (std::size_t i = 0; i < tpairs.size(); ++i) s.scores.push_back(scores[i * hs.size() + m].value);
        continued[to_string(hs[m])] = metrics_for(to_string(hs[m]), s);
      }
    }
    std::map<std::string, MethodMetrics> cold;
    if (auto p = ctx.era_path(*era, "coldstart_scores.csv"); fs::exists(p)) {
      auto t = read_table(p, "coldstart");
      auto lc = column(t, "label");
      std::vector<Label> labels;
      for (const auto& r : t.rows) labels.push_back(r[lc] == "1" ? 1 : 0);
      ScoreColumns cc;
      cc.add_table(t, t.rows.size());
      std::vector<std::size_t> all(t.rows.size());
      std::iota(all.begin(), all.end(), 0);
      Table ct{{"method", "auroc", "pairs", "note"}, {}};
      for (const auto& name : cc.order) {
        auto s = present(cc.values[name], labels, all);
        auto m = metrics_for(name, s);
        std::string key = name == "llm_probability" ? llm_name : name;
        if (std::find(feature_names().begin(), feature_names().end(), name) != feature_names().end()) key = "meta:" + name;
        ct.rows.push_back({key, auroc_cell(m), std::to_string(s.scores.size()), m.note});
        cold[key] = m;
      }
      report.tables["coldstart_auroc"] = ct;
    }
    Table et{{"method", "new_2hop_natural", "continued", "cold_start"}, {}};
    std::vector<std::string> names = cols.order;
    for (const auto& [k, _] : continued)
      if (std::find(names.begin(), names.end(), k) == names.end()) names.push_back(k);
    for (const auto& name : names) {
      std::string nat = "NA";
      for (const auto& m : report.methods)
        if (m.method == name) nat = auroc_cell(m);
      auto cont = continued.count(name) ? auroc_cell(continued[name]) : "NA";
      auto cs = cold.count(name) ? auroc_cell(cold[name]) : "NA";
      et.rows.push_back({name, nat, cont, cs});
    }
    report.tables["edge_types"] = et;

    if (auto p = ctx.era_path(*era, "candidates.json"); fs::exists(p)) {
      auto cj = read_json(p, "candidates");
      report.tables["candidate_pool"] = Table{
          {"scope_nodes", "candidates", "positives_in_pool", "new_edges_in_scope", "recall_ceiling"},
          {{std::to_string(cj.value("scope_nodes", 0)), std::to_string(cj.value("candidates", 0)),
            std::to_string(cj.value("positives_in_pool", 0)), std::to_string(cj.value("new_edges_in_scope", 0)),
            cj["recall_ceiling"].is_null() ? "NA" : format_number(cj["recall_ceiling"].get<double>())}}};
    }

    auto problems = validate_report(json(report));
    if (!problems.empty()) throw Error("internal error: report failed validation: " + problems.front());
    emit_report(report, ctx.era_path(*era, "report"), ctx.provenance());
    ctx.log << fmt::format("evaluate {}: {} methods on {} natural / {} balanced pairs\n", era->name,
                           report.methods.size(), natural.size(), balanced.size());
  }
}

void cmd_report(const Ctx& ctx) {
  json eras = json::object();
  Table summary{{"era", "method", "natural_auroc", "balanced_auroc"}, {}};
  std::vector<std::string> invalid;
  for (const auto* era : selected_eras(ctx)) {
    auto j = read_json(ctx.era_path(*era, "report/report.json"), "evaluate");
    for (const auto& p : validate_report(j)) invalid.push_back(era->name + ": " + p);
    EvalReport r = j.get<EvalReport>();
    if (auto it = r.tables.find("method_auroc"); it != r.tables.end())
      for (const auto& row : it->second.rows) summary.rows.push_back({era->name, row[0], row[1], row[3]});
    eras[era->name] = std::move(j);
  }
  if (!invalid.empty()) throw Error("report validation failed: " + invalid.front());
  write_table(ctx, ctx.out("method_auroc_by_era.csv"), summary);
  write_json(ctx, ctx.out("report.json"), {{"eras", eras}, {"config", ctx.cfg.to_json()}});
  ctx.log << fmt::format("report: {} eras -> {}\n", eras.size(), ctx.out("report.json").string());
}

}  // namespace

const std::vector<std::string>& pipeline_commands() {
  static const std::vector<std::string> commands{"ingest",   "stats",  "split", "communities", "candidates",
                                                 "train-embeddings", "score", "sample", "llm", "coldstart",
                                                 "evaluate", "report"};
  return commands;
}

void run_command(const std::string& command, const RunConfig& cfg, const RunFlags& flags, std::ostream& log) {
  Ctx ctx{cfg, flags, log, command, cfg.hash()};
  if (command == "ingest") return cmd_ingest(ctx);
  if (command == "stats") return cmd_stats(ctx);
  if (command == "split") return cmd_split(ctx);
  if (command == "communities") return cmd_communities(ctx);
  if (command == "candidates") return cmd_candidates(ctx);
  if (command == "train-embeddings") return cmd_train_embeddings(ctx);
  if (command == "score") return cmd_score(ctx);
  if (command == "sample") return cmd_sample(ctx);
  if (command == "llm") return cmd_llm(ctx);
  if (command == "coldstart") return cmd_coldstart(ctx);
  if (command == "evaluate") return cmd_evaluate(ctx);
  if (command == "report") return cmd_report(ctx);
  if (command == "all") {
    for (const auto& c : pipeline_commands()) {
      RunFlags f = flags;
      if (c == "score" || c == "train-embeddings") f.methods.clear();
      run_command(c, cfg, f, log);
    }
    return;
  }
  throw InvalidArgument("unknown command: " + command);
}

void write_synthetic_workspace(const fs::path& dir, std::uint64_t seed, std::size_t authors) {
  fs::create_directories(dir);
  SynthConfig sc;
  sc.seed = seed;
  sc.authors = authors;
  auto data = generate_synthetic(sc);
  {
    std::ostringstream os;
    write_synthetic_edges(data, os);
    write_file_atomic(dir / "edges.csv", os.str());
  }
  {
    ProfileStore store;
    for (auto p : data.profiles) store.upsert(std::move(p));
    std::ostringstream os;
    write_profiles_jsonl(store, os);
    write_file_atomic(dir / "profiles.jsonl", os.str());
  }
  // Desk-scale settings: small embeddings, offline mock LLM without rate limiting.
  json config = {{"paths", {{"edges", "edges.csv"}, {"profiles", "profiles.jsonl"}, {"cache", "cache"}, {"out", "out"}}},
                 {"seed", seed},
                 {"sampling", {{"natural_total", 5000}, {"balanced_total", 500}}},
                 {"embedding",
                  {{"dimension", 32},
                   {"walk_length", 20},
                   {"walks_per_node", 4},
                   {"window", 5},
                   {"negatives", 5},
                   {"epochs", 1}}},
                 {"llm", {{"backend", "mock"}, {"requests_per_minute", 0}, {"concurrency", 1}, {"backoff_ms", 0}}}};
  write_file_atomic(dir / "config.json", config.dump(2) + "\n");
}

}  // namespace coauthlp
