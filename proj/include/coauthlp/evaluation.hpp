#pragma once

// Ranking metrics, stratified sampling, calibration, agreement quadrants and
// the evaluation report.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace coauthlp {

using Label = std::uint8_t;  // 1 = positive

/// Mann-Whitney AUROC with ties counted as one half, computed exactly from
/// integer counts. Throws InvalidArgument("degenerate labels") when either
/// class is empty, and on NaN scores or a length mismatch.
double auroc(std::span<const double> scores, std::span<const Label> labels);

struct ConfusionRates {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double recall = 0.0;  // equals tpr
  std::optional<double> precision;  // absent when nothing clears the threshold
  double tpr = 0.0;
  double fpr = 0.0;
  bool operator==(const ConfusionRates&) const = default;
};

/// Pairs with score >= threshold are predicted positive.
ConfusionRates recall_precision(std::span<const double> scores, std::span<const Label> labels, double threshold);

/// Equal-count bins by rank; tied scores all take the bin of their lowest rank.
/// Returns a 0-based bin index per item.
std::vector<int> quantile_bins(std::span<const double> scores, int bins);

struct CalibrationRow {
  int decile = 0;  // 1-based
  std::size_t pairs = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::optional<double> tpr;  // absent without positives
  std::optional<double> fpr;  // absent without negatives

  bool operator==(const CalibrationRow&) const = default;
};

/// TPR/FPR of binary verdicts within each AA decile of the given pairs.
std::vector<CalibrationRow> calibration_by_decile(std::span<const double> aa, std::span<const Label> verdicts,
                                                  std::span<const Label> labels);

/// Pearson correlation of average ranks. Throws on a length mismatch, fewer
/// than two items, or a constant input.
double spearman(std::span<const double> x, std::span<const double> y);

enum class Quadrant : std::uint8_t { BothCatch, LlmOnly, AaOnly, BothMiss };
const char* to_string(Quadrant q) noexcept;

struct QuadrantCounts {
  std::size_t both_catch = 0;
  std::size_t llm_only = 0;
  std::size_t aa_only = 0;
  std::size_t both_miss = 0;
  double aa_threshold = 0.0;
  double llm_threshold = 0.5;

  std::size_t total() const noexcept { return both_catch + llm_only + aa_only + both_miss; }
  bool operator==(const QuadrantCounts&) const = default;
};

struct QuadrantResult {
  QuadrantCounts counts;
  std::vector<std::optional<Quadrant>> category;  // absent for negatives
};

/// Median AA among positives as the AA threshold, then a 2x2 split of the
/// positives. Throws InvalidArgument when there are no positives.
QuadrantResult agreement_quadrants(std::span<const double> aa, std::span<const double> llm_probs,
                                   std::span<const Label> labels, double llm_threshold = 0.5);
/// Same split with an explicit AA threshold.
QuadrantResult agreement_quadrants_at(std::span<const double> aa, std::span<const double> llm_probs,
                                      std::span<const Label> labels, double aa_threshold,
                                      double llm_threshold = 0.5);

enum class SampleMode : std::uint8_t { NaturalStratified, Balanced };
const char* to_string(SampleMode m) noexcept;
std::optional<SampleMode> parse_sample_mode(std::string_view name) noexcept;

struct SamplePlan {
  SampleMode mode = SampleMode::NaturalStratified;
  std::size_t total = 5000;  // 500 for Balanced
  std::uint64_t seed = 0;

  static SamplePlan natural(std::uint64_t seed, std::size_t total = 5000) {
    return {SampleMode::NaturalStratified, total, seed};
  }
  static SamplePlan balanced(std::uint64_t seed, std::size_t total = 500) { return {SampleMode::Balanced, total, seed}; }
  int strata() const noexcept { return mode == SampleMode::NaturalStratified ? 10 : 5; }
};

struct StratumDraw {
  std::string group;  // "all", "positive" or "negative"
  int stratum = 0;    // 1-based
  std::size_t available = 0;
  std::size_t quota = 0;
  std::size_t drawn = 0;

  bool operator==(const StratumDraw&) const = default;
};

struct SampleResult {
  std::vector<std::size_t> indices;  // ascending pool positions
  std::vector<StratumDraw> strata;
  std::size_t shortfall_filled = 0;  // drawn uniformly to cover short strata
  std::vector<std::string> warnings;
};

/// NaturalStratified: equal quotas over 10 AA deciles of the pool, shortfall
/// filled uniformly from the rest. Balanced: total/2 per class, each class
/// stratified over its own AA quintiles. A request larger than what is
/// available takes everything and adds a warning. Deterministic under seed.
SampleResult stratified_sample(std::span<const double> aa, std::span<const Label> labels, const SamplePlan& plan);

struct MethodMetrics {
  std::string method;
  std::optional<double> auroc;  // absent with a reason when undefined
  std::string note;
  std::optional<double> threshold;
  std::optional<ConfusionRates> at_threshold;

  bool operator==(const MethodMetrics&) const = default;
};

struct HomophilyRow {
  std::string feature;
  std::size_t positives = 0;  // pairs with the feature present
  std::size_t negatives = 0;
  std::optional<double> collab_rate;
  std::optional<double> noncollab_rate;
  std::optional<double> ratio;  // absent when the non-collaborating rate is zero

  bool operator==(const HomophilyRow&) const = default;
};

struct SampleMeta {
  std::string mode;
  std::uint64_t seed = 0;
  std::size_t requested = 0;
  std::size_t drawn = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t pool = 0;
  std::size_t pool_positives = 0;
  std::size_t shortfall_filled = 0;
  std::vector<std::string> warnings;

  bool operator==(const SampleMeta&) const = default;
};

/// A named CSV table carried inside the report.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  bool operator==(const Table&) const = default;
};

struct EvalReport {
  std::string era;
  nlohmann::json provenance = nlohmann::json::object();  // seeds, config hash, tool version
  SampleMeta sample;
  std::vector<MethodMetrics> methods;
  std::vector<CalibrationRow> calibration;
  std::map<std::string, double> spearman;  // "AA~LLM" style keys
  std::optional<QuadrantCounts> quadrants;
  std::size_t quadrant_positives = 0;
  std::vector<HomophilyRow> homophily;
  std::map<std::string, Table> tables;

  bool operator==(const EvalReport&) const = default;
};

void to_json(nlohmann::json& j, const EvalReport& r);
void from_json(const nlohmann::json& j, EvalReport& r);

/// Structural and internal-consistency check; returns one message per problem.
std::vector<std::string> validate_report(const nlohmann::json& j);

void write_table_csv(std::ostream& out, const Table& t, const std::string& provenance_line = {});

/// Writes report.json, methods.csv, homophily.csv, quadrants.csv,
/// fig_calibration.csv and one CSV per extra table. Returns written paths.
std::vector<std::filesystem::path> emit_report(const EvalReport& r, const std::filesystem::path& dir,
                                               const std::string& provenance_line = {});

}  // namespace coauthlp
