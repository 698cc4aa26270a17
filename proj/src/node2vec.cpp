#include "coauthlp/node2vec.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "coauthlp/error.hpp"
#include "coauthlp/hash.hpp"
#include "coauthlp/parallel.hpp"
#include "coauthlp/text.hpp"

namespace coauthlp {

void EmbeddingConfig::validate() const {
  if (dimension < 1) throw InvalidArgument("embedding dimension must be >= 1");
  if (walk_length < 2) throw InvalidArgument("walk_length must be >= 2");
  if (walks_per_node < 1) throw InvalidArgument("walks_per_node must be >= 1");
  if (!(p > 0.0) || !(q > 0.0)) throw InvalidArgument("p and q must be positive");
  if (window < 1) throw InvalidArgument("window must be >= 1");
  if (negatives < 0) throw InvalidArgument("negatives must be >= 0");
  if (epochs < 0) throw InvalidArgument("epochs must be >= 0");
  if (!(learning_rate > 0.0)) throw InvalidArgument("learning_rate must be positive");
}

std::uint64_t EmbeddingConfig::fingerprint() const {
  return fnv1a64(fmt::format("d={};len={};walks={};p={};q={};win={};neg={};ep={};lr={};seed={}", dimension,
                             walk_length, walks_per_node, p, q, window, negatives, epochs, learning_rate, seed));
}

std::vector<std::pair<double, double>> default_pq_sweep() {
  return {{1.0, 1.0}, {0.25, 1.0}, {4.0, 1.0}, {1.0, 0.25}, {1.0, 4.0}};
}

namespace {

// Vose's method. Writes n probabilities and aliases to the output pointers.
void build_alias(std::span<const double> w, double* prob, std::uint32_t* alias) {
  const std::size_t n = w.size();
  double total = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidArgument("alias weights must be finite and non-negative");
    total += x;
  }
  if (n == 0 || total <= 0.0) throw InvalidArgument("alias table needs positive total weight");
  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = w[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    auto s = small.back();
    small.pop_back();
    auto l = large.back();
    prob[s] = scaled[s];
    alias[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (auto i : large) prob[i] = 1.0, alias[i] = i;
  for (auto i : small) prob[i] = 1.0, alias[i] = i;  // rounding leftovers
}

inline std::size_t alias_draw(const double* prob, const std::uint32_t* alias, std::size_t n, Rng& rng) {
  std::size_t i = static_cast<std::size_t>(rng.below(n));
  return rng.uniform() < prob[i] ? i : alias[i];
}

}  // namespace

AliasTable::AliasTable(std::span<const double> weights) : prob_(weights.size()), alias_(weights.size()) {
  build_alias(weights, prob_.data(), alias_.data());
}

std::size_t AliasTable::sample(Rng& rng) const {
  if (prob_.empty()) throw InvalidArgument("sampling from an empty alias table");
  return alias_draw(prob_.data(), alias_.data(), prob_.size(), rng);
}

double transition_weight(const GraphSnapshot& g, NodeId prev, NodeId x, double p, double q) {
  if (x == prev) return 1.0 / p;
  if (g.has_edge(prev, x)) return 1.0;
  return 1.0 / q;
}

namespace {

// Second-order transition sampler. With p = q = 1 every step is uniform; otherwise
// either per-directed-edge alias tables or rejection sampling against max alpha.
class Walker {
 public:
  Walker(const GraphSnapshot& g, const EmbeddingConfig& cfg) : g_(g), p_(cfg.p), q_(cfg.q) {
    uniform_ = cfg.p == 1.0 && cfg.q == 1.0;
    if (uniform_) return;
    max_alpha_ = std::max({1.0 / p_, 1.0, 1.0 / q_});
    const std::size_t n = g.id_space();
    edge_base_.assign(n + 1, 0);
    for (NodeId u = 0; u < n; ++u) edge_base_[u + 1] = edge_base_[u] + g.degree(u);
    std::size_t cells = 0;
    for (NodeId u = 0; u < n; ++u) cells += g.degree(u) * g.degree(u);
    if (cells > cfg.alias_budget) return;
    use_alias_ = true;
    table_base_.assign(edge_base_[n] + 1, 0);
    for (NodeId t = 0; t < n; ++t) {
      auto nb = g.neighbors(t);
      for (std::size_t i = 0; i < nb.size(); ++i) {
        std::size_t e = edge_base_[t] + i;
        table_base_[e + 1] = table_base_[e] + g.degree(nb[i]);
      }
    }
    prob_.resize(cells);
    alias_.resize(cells);
    std::vector<double> w;
    for (NodeId t = 0; t < n; ++t) {
      auto nb = g.neighbors(t);
      for (std::size_t i = 0; i < nb.size(); ++i) {
        auto next = g.neighbors(nb[i]);
        w.resize(next.size());
        for (std::size_t k = 0; k < next.size(); ++k) w[k] = transition_weight(g, t, next[k], p_, q_);
        std::size_t base = table_base_[edge_base_[t] + i];
        build_alias(w, prob_.data() + base, alias_.data() + base);
      }
    }
  }

  NodeId step(NodeId prev, NodeId cur, Rng& rng) const {
    auto nb = g_.neighbors(cur);
    if (uniform_) return nb[rng.below(nb.size())];
    if (use_alias_) {
      auto from = g_.neighbors(prev);
      auto pos = static_cast<std::size_t>(std::lower_bound(from.begin(), from.end(), cur) - from.begin());
      std::size_t base = table_base_[edge_base_[prev] + pos];
      return nb[alias_draw(prob_.data() + base, alias_.data() + base, nb.size(), rng)];
    }
    for (;;) {
      NodeId x = nb[rng.below(nb.size())];
      if (rng.uniform() * max_alpha_ < transition_weight(g_, prev, x, p_, q_)) return x;
    }
  }

 private:
  const GraphSnapshot& g_;
  double p_, q_;
  double max_alpha_ = 1.0;
  bool uniform_ = true;
  bool use_alias_ = false;
  std::vector<std::size_t> edge_base_;
  std::vector<std::size_t> table_base_;
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace

WalkCorpus generate_walks(const GraphSnapshot& g, const EmbeddingConfig& cfg) {
  cfg.validate();
  auto starts = g.active_nodes();
  if (starts.empty()) throw InvalidArgument("cannot generate walks on a graph with no edges");
  Walker walker(g, cfg);

  const std::size_t rounds = static_cast<std::size_t>(cfg.walks_per_node);
  const std::size_t len = static_cast<std::size_t>(cfg.walk_length);
  // Each round visits the start nodes in a seeded order; slot r*n+i holds one walk.
  std::vector<std::vector<NodeId>> order(rounds, starts);
  for (std::size_t r = 0; r < rounds; ++r) {
    Rng rng(derive_seed(cfg.seed, 0x0a1c, r));
    rng.shuffle(std::span<NodeId>(order[r]));
  }
  const std::size_t total = rounds * starts.size();
  std::vector<std::vector<NodeId>> walks(total);
  parallel_for(total, cfg.workers, [&](std::size_t slot) {
    std::size_t r = slot / starts.size();
    NodeId s = order[r][slot % starts.size()];
    Rng rng(derive_seed(cfg.seed, r, s));
    auto& w = walks[slot];
    w.reserve(len);
    w.push_back(s);
    while (w.size() < len) {
      NodeId cur = w.back();
      if (g.degree(cur) == 0) break;
      if (w.size() == 1) {
        auto nb = g.neighbors(cur);
        w.push_back(nb[rng.below(nb.size())]);
      } else {
        w.push_back(walker.step(w[w.size() - 2], cur, rng));
      }
    }
  });

  WalkCorpus corpus;
  corpus.offsets.reserve(total + 1);
  std::size_t tokens = 0;
  for (const auto& w : walks) tokens += w.size();
  corpus.tokens.reserve(tokens);
  for (auto& w : walks) {
    corpus.tokens.insert(corpus.tokens.end(), w.begin(), w.end());
    corpus.offsets.push_back(corpus.tokens.size());
  }
  return corpus;
}

namespace {

template <class T>
T sigmoid(T x) {
  if (x >= 0) return T(1) / (T(1) + std::exp(-x));
  T e = std::exp(x);
  return e / (T(1) + e);
}

// -log(sigmoid(x)), stable for large |x|.
double neg_log_sigmoid(double x) {
  return x >= 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

// outs[0] is the positive context, the rest are negatives. Fills the centre
// gradient (d) and one gradient row per output (n_out * d); returns the loss
// when requested.
template <class T>
double sgns_core(const T* center, const T* const* outs, std::size_t n_out, std::size_t d, T* g_center, T* g_outs,
                 bool with_loss) {
  std::fill(g_center, g_center + d, T(0));
  double loss = 0.0;
  for (std::size_t k = 0; k < n_out; ++k) {
    const T* o = outs[k];
    T s = 0;
    for (std::size_t i = 0; i < d; ++i) s += o[i] * center[i];
    const T label = k == 0 ? T(1) : T(0);
    const T g = sigmoid(s) - label;
    if (with_loss) loss += neg_log_sigmoid(k == 0 ? double(s) : -double(s));
    T* go = g_outs + k * d;
    for (std::size_t i = 0; i < d; ++i) {
      g_center[i] += g * o[i];
      go[i] = g * center[i];
    }
  }
  return loss;
}

}  // namespace

SgnsGradient sgns_gradient(std::span<const double> center, std::span<const double> context,
                           std::span<const std::span<const double>> negatives) {
  const std::size_t d = center.size();
  if (context.size() != d) throw InvalidArgument("context dimension mismatch");
  std::vector<const double*> outs{context.data()};
  for (auto n : negatives) {
    if (n.size() != d) throw InvalidArgument("negative dimension mismatch");
    outs.push_back(n.data());
  }
  SgnsGradient r;
  r.center.resize(d);
  std::vector<double> g_outs(outs.size() * d);
  r.loss = sgns_core<double>(center.data(), outs.data(), outs.size(), d, r.center.data(), g_outs.data(), true);
  r.context.assign(g_outs.begin(), g_outs.begin() + static_cast<std::ptrdiff_t>(d));
  for (std::size_t k = 1; k < outs.size(); ++k)
    r.negatives.emplace_back(g_outs.begin() + static_cast<std::ptrdiff_t>(k * d),
                             g_outs.begin() + static_cast<std::ptrdiff_t>((k + 1) * d));
  return r;
}

EmbeddingTable::EmbeddingTable(std::size_t id_space, std::size_t dimension, std::span<const NodeId> nodes)
    : dim_(dimension), nodes_(nodes.begin(), nodes.end()), row_of_(id_space, -1), data_(nodes.size() * dimension) {
  for (std::size_t r = 0; r < nodes_.size(); ++r) {
    if (nodes_[r] >= id_space) throw InvalidArgument("embedded node outside id space");
    if (row_of_[nodes_[r]] >= 0) throw InvalidArgument("duplicate embedded node");
    row_of_[nodes_[r]] = static_cast<std::int64_t>(r);
  }
}

std::span<const float> EmbeddingTable::vector(NodeId u) const {
  if (!has(u)) throw InvalidArgument("node not embedded: " + std::to_string(u));
  return {data_.data() + static_cast<std::size_t>(row_of_[u]) * dim_, dim_};
}

std::span<float> EmbeddingTable::mutable_vector(NodeId u) {
  if (!has(u)) throw InvalidArgument("node not embedded: " + std::to_string(u));
  return {data_.data() + static_cast<std::size_t>(row_of_[u]) * dim_, dim_};
}

namespace {

constexpr char kEmbeddingMagic[8] = {'C', 'L', 'P', 'E', 'M', 'B', '0', '1'};

template <class T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw ParseError("truncated embedding file");
  return v;
}

}  // namespace

void EmbeddingTable::write_binary(std::ostream& out) const {
  out.write(kEmbeddingMagic, sizeof kEmbeddingMagic);
  put<std::uint64_t>(out, dim_);
  put<std::uint64_t>(out, nodes_.size());
  put<std::uint64_t>(out, row_of_.size());
  put<std::uint64_t>(out, config_fingerprint);
  put<std::uint64_t>(out, corpus_tokens);
  out.write(reinterpret_cast<const char*>(nodes_.data()), static_cast<std::streamsize>(nodes_.size() * sizeof(NodeId)));
  out.write(reinterpret_cast<const char*>(data_.data()), static_cast<std::streamsize>(data_.size() * sizeof(float)));
}

EmbeddingTable EmbeddingTable::read_binary(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kEmbeddingMagic, sizeof magic) != 0) throw ParseError("not an embedding file");
  auto d = get<std::uint64_t>(in);
  auto n = get<std::uint64_t>(in);
  auto space = get<std::uint64_t>(in);
  auto fp = get<std::uint64_t>(in);
  auto tokens = get<std::uint64_t>(in);
  std::vector<NodeId> nodes(n);
  in.read(reinterpret_cast<char*>(nodes.data()), static_cast<std::streamsize>(n * sizeof(NodeId)));
  if (!in) throw ParseError("truncated embedding file");
  EmbeddingTable t(space, d, nodes);
  in.read(reinterpret_cast<char*>(t.data_.data()), static_cast<std::streamsize>(t.data_.size() * sizeof(float)));
  if (!in) throw ParseError("truncated embedding file");
  t.config_fingerprint = fp;
  t.corpus_tokens = tokens;
  return t;
}

void EmbeddingTable::write_csv(std::ostream& out, const AuthorIndex& authors) const {
  out << "node_id";
  for (std::size_t i = 0; i < dim_; ++i) out << ",v" << i;
  out << '\n';
  for (std::size_t r = 0; r < nodes_.size(); ++r) {
    out << csv_field(authors.id_of(nodes_[r]));
    for (std::size_t i = 0; i < dim_; ++i) out << ',' << format_number(data_[r * dim_ + i]);
    out << '\n';
  }
}

namespace {

// Row access for the Hogwild path: relaxed atomics make concurrent
// read-modify-write races well-defined (updates may still be lost, by design).
template <bool Shared>
struct RowIo {
  static void load(const float* src, float* dst, std::size_t d) {
    if constexpr (Shared) {
      for (std::size_t i = 0; i < d; ++i)
        dst[i] = std::atomic_ref<float>(*const_cast<float*>(src + i)).load(std::memory_order_relaxed);
    } else {
      std::copy(src, src + d, dst);
    }
  }
  static void add(float* row, const float* delta, float scale, std::size_t d) {
    if constexpr (Shared) {
      for (std::size_t i = 0; i < d; ++i) {
        std::atomic_ref<float> a(row[i]);
        a.store(a.load(std::memory_order_relaxed) - scale * delta[i], std::memory_order_relaxed);
      }
    } else {
      for (std::size_t i = 0; i < d; ++i) row[i] -= scale * delta[i];
    }
  }
};

struct Trainer {
  const WalkCorpus& corpus;
  const EmbeddingConfig& cfg;
  const std::vector<std::int64_t>& row_of;
  const AliasTable& unigram;
  std::size_t d;
  float* in;
  float* out;
  std::uint64_t total_steps;
  std::atomic<std::uint64_t>& processed;

  template <bool Shared>
  void run(std::size_t walk_begin, std::size_t walk_end, Rng& rng) {
    using Io = RowIo<Shared>;
    const std::size_t max_out = static_cast<std::size_t>(cfg.negatives) + 1;
    std::vector<float> center(d), g_center(d), outs_buf(max_out * d), g_outs(max_out * d);
    std::vector<const float*> outs(max_out);
    std::vector<std::size_t> out_rows(max_out);
    const auto window = static_cast<std::ptrdiff_t>(cfg.window);
    const double lr0 = cfg.learning_rate;
    for (std::size_t w = walk_begin; w < walk_end; ++w) {
      auto walk = corpus.walk(w);
      const auto n = static_cast<std::ptrdiff_t>(walk.size());
      for (std::ptrdiff_t i = 0; i < n; ++i) {
        auto done = processed.fetch_add(1, std::memory_order_relaxed);
        const float lr = static_cast<float>(
            lr0 * std::max(1e-4, 1.0 - static_cast<double>(done) / static_cast<double>(total_steps)));
        const auto crow = static_cast<std::size_t>(row_of[walk[i]]);
        for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, i - window); j <= std::min(n - 1, i + window); ++j) {
          if (j == i) continue;
          const auto ctx = static_cast<std::size_t>(row_of[walk[j]]);
          std::size_t k = 0;
          out_rows[k++] = ctx;
          for (int s = 0; s < cfg.negatives; ++s) {
            auto r = unigram.sample(rng);
            if (r != ctx) out_rows[k++] = r;
          }
          Io::load(in + crow * d, center.data(), d);
          for (std::size_t m = 0; m < k; ++m) {
            Io::load(out + out_rows[m] * d, outs_buf.data() + m * d, d);
            outs[m] = outs_buf.data() + m * d;
          }
          sgns_core<float>(center.data(), outs.data(), k, d, g_center.data(), g_outs.data(), false);
          for (std::size_t m = 0; m < k; ++m) Io::add(out + out_rows[m] * d, g_outs.data() + m * d, lr, d);
          Io::add(in + crow * d, g_center.data(), lr, d);
        }
      }
    }
  }
};

}  // namespace

EmbeddingTable train_skipgram(const WalkCorpus& corpus, std::size_t id_space, const EmbeddingConfig& cfg) {
  cfg.validate();
  if (corpus.tokens.empty()) throw InvalidArgument("cannot train on an empty walk corpus");
  std::vector<std::uint64_t> counts(id_space, 0);
  for (NodeId t : corpus.tokens) {
    if (t >= id_space) throw InvalidArgument("walk token outside id space");
    ++counts[t];
  }
  std::vector<NodeId> vocab;
  for (NodeId u = 0; u < id_space; ++u)
    if (counts[u] > 0) vocab.push_back(u);

  const auto d = static_cast<std::size_t>(cfg.dimension);
  EmbeddingTable table(id_space, d, vocab);
  table.config_fingerprint = cfg.fingerprint();
  table.corpus_tokens = corpus.tokens.size();

  Rng init(derive_seed(cfg.seed, 0x1417));
  for (NodeId u : vocab)
    for (float& x : table.mutable_vector(u)) x = static_cast<float>((init.uniform() - 0.5) / static_cast<double>(d));
  if (cfg.epochs == 0) return table;

  std::vector<std::int64_t> row_of(id_space, -1);
  std::vector<double> noise(vocab.size());
  for (std::size_t r = 0; r < vocab.size(); ++r) {
    row_of[vocab[r]] = static_cast<std::int64_t>(r);
    noise[r] = std::pow(static_cast<double>(counts[vocab[r]]), 0.75);
  }
  AliasTable unigram(noise);
  std::vector<float> out(vocab.size() * d, 0.0f);
  float* in = table.mutable_vector(vocab.front()).data();  // rows are contiguous in vocab order

  std::atomic<std::uint64_t> processed{0};
  Trainer trainer{corpus, cfg, row_of, unigram, d, in, out.data(),
                  static_cast<std::uint64_t>(cfg.epochs) * corpus.tokens.size(), processed};
  const unsigned workers =
      std::min<unsigned>(resolve_workers(cfg.workers), static_cast<unsigned>(corpus.walk_count()));
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (workers <= 1) {
      Rng rng(derive_seed(cfg.seed, 0x7a1, static_cast<std::uint64_t>(epoch)));
      trainer.run<false>(0, corpus.walk_count(), rng);
      continue;
    }
    const std::size_t per = (corpus.walk_count() + workers - 1) / workers;
    parallel_for(workers, workers, [&](std::size_t w) {
      Rng rng(derive_seed(cfg.seed, 0x7a1 + w + 1, static_cast<std::uint64_t>(epoch)));
      trainer.run<true>(w * per, std::min(corpus.walk_count(), (w + 1) * per), rng);
    });
  }
  return table;
}

const char* to_string(EmbeddingOperator op) noexcept {
  switch (op) {
    case EmbeddingOperator::Cosine: return "cosine";
    case EmbeddingOperator::HadamardDot: return "hadamard_dot";
    case EmbeddingOperator::NegL1: return "neg_l1";
    case EmbeddingOperator::NegL2: return "neg_l2";
  }
  return "?";
}

std::vector<EmbeddingOperator> all_embedding_operators() {
  return {EmbeddingOperator::Cosine, EmbeddingOperator::HadamardDot, EmbeddingOperator::NegL1,
          EmbeddingOperator::NegL2};
}

std::optional<EmbeddingOperator> parse_embedding_operator(std::string_view name) noexcept {
  for (auto op : all_embedding_operators())
    if (name == to_string(op)) return op;
  return std::nullopt;
}

double score_vectors(std::span<const float> a, std::span<const float> b, EmbeddingOperator op) {
  if (a.size() != b.size()) throw InvalidArgument("embedding dimension mismatch");
  double dot = 0, na = 0, nb = 0, l1 = 0, l2 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i], y = b[i];
    dot += x * y;
    na += x * x;
    nb += y * y;
    l1 += std::abs(x - y);
    l2 += (x - y) * (x - y);
  }
  switch (op) {
    case EmbeddingOperator::Cosine: return na == 0 || nb == 0 ? 0.0 : dot / (std::sqrt(na) * std::sqrt(nb));
    case EmbeddingOperator::HadamardDot: return dot;
    case EmbeddingOperator::NegL1: return -l1;
    case EmbeddingOperator::NegL2: return -std::sqrt(l2);
  }
  throw InvalidArgument("unknown embedding operator");
}

double score_pair_embedding(const EmbeddingTable& table, NodeId u, NodeId v, EmbeddingOperator op) {
  return score_vectors(table.vector(u), table.vector(v), op);
}

}  // namespace coauthlp
