#pragma once

// JSON run configuration shared by every pipeline command.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coauthlp/eras.hpp"
#include "coauthlp/heuristics.hpp"
#include "coauthlp/llm.hpp"
#include "coauthlp/node2vec.hpp"

namespace coauthlp {

inline constexpr const char* kToolVersion = "coauthlp 0.1.0";

struct RunConfig {
  // Paths are resolved against the config file's directory.
  std::filesystem::path edges;
  std::filesystem::path profiles;  // optional
  std::filesystem::path cache_dir;
  std::filesystem::path out_dir;

  std::vector<EraConfig> eras = default_eras();
  std::optional<YearRange> year_range;  // ingest filter

  int stats_first_year = 2004;
  int stats_last_year = 2023;
  BoundaryThresholds boundaries;

  std::uint64_t seed = 42;
  unsigned workers = 0;  // 0 = all hardware threads

  std::uint64_t community_seed = 0;
  double community_resolution = 1.0;
  std::size_t top_communities = 1;

  std::size_t natural_total = 5000;
  std::size_t balanced_total = 500;

  std::vector<Heuristic> heuristics = topology_heuristics();

  EmbeddingConfig embedding;
  std::vector<EmbeddingOperator> embedding_operators = all_embedding_operators();

  std::string llm_backend = "mock";  // "mock" or "openai"
  std::string llm_base_url;
  LlmConfig llm;
  PromptVariant llm_variant = PromptVariant::Base;
  std::size_t llm_max_pairs = 0;  // 0 = every sampled pair

  std::size_t coldstart_negatives_per_positive = 1;
  bool coldstart_llm = true;

  std::string openalex_mailto;
  double openalex_rps = 10.0;

  std::filesystem::path base_dir;

  /// Effective settings with sorted keys; paths relative to base_dir.
  nlohmann::json to_json() const;
  /// FNV-1a of to_json(), hex encoded.
  std::string hash() const;
  const EraConfig& era(const std::string& name) const;

  /// Throws InvalidArgument on unknown keys' values or unusable settings.
  static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  static RunConfig load(const std::filesystem::path& path);
  /// Checks every referenced input path before any stage runs.
  void validate_paths() const;
};

}  // namespace coauthlp
