#pragma once

// node2vec: second-order biased walks, skip-gram with negative sampling,
// and embedding-based pair scores.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "coauthlp/graph.hpp"
#include "coauthlp/rng.hpp"

namespace coauthlp {

struct EmbeddingConfig {
  int dimension = 128;
  int walk_length = 80;
  int walks_per_node = 10;
  double p = 1.0;  // return parameter
  double q = 1.0;  // in-out parameter
  int window = 10;
  int negatives = 5;
  int epochs = 5;
  double learning_rate = 0.025;
  std::uint64_t seed = 0;
  unsigned workers = 1;  // 1 = deterministic training
  /// Directed-edge alias tables are built only while sum(deg^2) stays below
  /// this; larger graphs sample transitions by rejection instead.
  std::size_t alias_budget = 50'000'000;

  void validate() const;
  /// Fingerprint of every field that influences the trained vectors.
  std::uint64_t fingerprint() const;
};

/// (p, q) settings for the sensitivity sweep.
std::vector<std::pair<double, double>> default_pq_sweep();

/// Vose alias method over non-negative weights.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(std::span<const double> weights);
  std::size_t sample(Rng& rng) const;
  std::size_t size() const noexcept { return prob_.size(); }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

/// Unnormalised second-order transition weight for stepping to x from the
/// current node when the walk arrived from `prev`.
double transition_weight(const GraphSnapshot& g, NodeId prev, NodeId x, double p, double q);

struct WalkCorpus {
  std::vector<NodeId> tokens;
  std::vector<std::size_t> offsets{0};

  std::size_t walk_count() const noexcept { return offsets.size() - 1; }
  std::span<const NodeId> walk(std::size_t i) const noexcept {
    return {tokens.data() + offsets[i], tokens.data() + offsets[i + 1]};
  }
};

/// walks_per_node walks from every active node. Identical for a given seed
/// regardless of cfg.workers. Throws InvalidArgument on an edgeless graph.
WalkCorpus generate_walks(const GraphSnapshot& g, const EmbeddingConfig& cfg);

/// Loss and gradients of one skip-gram negative-sampling term
///   -log s(ctx . c) - sum_k log s(-neg_k . c)
/// with respect to the centre (input) vector and every output vector.
struct SgnsGradient {
  double loss = 0.0;
  std::vector<double> center;
  std::vector<double> context;
  std::vector<std::vector<double>> negatives;
};

SgnsGradient sgns_gradient(std::span<const double> center, std::span<const double> context,
                           std::span<const std::span<const double>> negatives);

class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::size_t id_space, std::size_t dimension, std::span<const NodeId> nodes);

  std::size_t dimension() const noexcept { return dim_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t id_space() const noexcept { return row_of_.size(); }
  const std::vector<NodeId>& nodes() const noexcept { return nodes_; }
  bool has(NodeId u) const noexcept { return u < row_of_.size() && row_of_[u] >= 0; }

  /// Throws InvalidArgument("node not embedded") when absent.
  std::span<const float> vector(NodeId u) const;
  std::span<float> mutable_vector(NodeId u);

  std::uint64_t config_fingerprint = 0;
  std::uint64_t corpus_tokens = 0;

  /// Magic, d, n, node ids, then row-major float32 vectors.
  void write_binary(std::ostream& out) const;
  static EmbeddingTable read_binary(std::istream& in);
  void write_csv(std::ostream& out, const AuthorIndex& authors) const;

  bool operator==(const EmbeddingTable&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<NodeId> nodes_;
  std::vector<std::int64_t> row_of_;
  std::vector<float> data_;
};

/// Trains input vectors for every node in the corpus. epochs == 0 returns
/// the seeded initialisation. Throws InvalidArgument on an empty corpus.
EmbeddingTable train_skipgram(const WalkCorpus& corpus, std::size_t id_space, const EmbeddingConfig& cfg);

enum class EmbeddingOperator : std::uint8_t { Cosine, HadamardDot, NegL1, NegL2 };

const char* to_string(EmbeddingOperator op) noexcept;
std::optional<EmbeddingOperator> parse_embedding_operator(std::string_view name) noexcept;
std::vector<EmbeddingOperator> all_embedding_operators();

/// Higher means more likely to link for every operator.
double score_pair_embedding(const EmbeddingTable& table, NodeId u, NodeId v, EmbeddingOperator op);
double score_vectors(std::span<const float> a, std::span<const float> b, EmbeddingOperator op);

}  // namespace coauthlp
