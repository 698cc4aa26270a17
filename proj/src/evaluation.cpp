#include "coauthlp/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "coauthlp/error.hpp"
#include "coauthlp/io.hpp"
#include "coauthlp/rng.hpp"
#include "coauthlp/text.hpp"

namespace coauthlp {

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw InvalidArgument(fmt::format("{}: length mismatch ({} vs {})", what, a, b));
}

std::vector<std::size_t> order_by_score(std::span<const double> scores) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });
  return idx;
}

}  // namespace

double auroc(std::span<const double> scores, std::span<const Label> labels) {
  require_same_length(scores.size(), labels.size(), "auroc");
  for (double s : scores)
    if (std::isnan(s)) throw InvalidArgument("auroc: NaN score");
  std::uint64_t pos = 0;
  for (Label l : labels) pos += l ? 1 : 0;
  const std::uint64_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0) throw InvalidArgument("degenerate labels");

  // Twice the Mann-Whitney U: each positive earns 2 per lower negative and 1 per tied one.
  auto idx = order_by_score(scores);
  unsigned __int128 u2 = 0;
  std::uint64_t neg_below = 0;
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    std::uint64_t gp = 0, gn = 0;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) {
      (labels[idx[j]] ? gp : gn) += 1;
      ++j;
    }
    u2 += static_cast<unsigned __int128>(gp) * (2 * neg_below + gn);
    neg_below += gn;
    i = j;
  }
  const unsigned __int128 denom = static_cast<unsigned __int128>(2) * pos * neg;
  return static_cast<double>(static_cast<long double>(u2) / static_cast<long double>(denom));
}

ConfusionRates recall_precision(std::span<const double> scores, std::span<const Label> labels, double threshold) {
  require_same_length(scores.size(), labels.size(), "recall_precision");
  ConfusionRates r;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    if (labels[i]) {
      (predicted ? r.tp : r.fn) += 1;
    } else {
      (predicted ? r.fp : r.tn) += 1;
    }
  }
  if (r.tp + r.fn == 0 || r.fp + r.tn == 0) throw InvalidArgument("degenerate labels");
  r.tpr = r.recall = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
  r.fpr = static_cast<double>(r.fp) / static_cast<double>(r.fp + r.tn);
  if (r.tp + r.fp > 0) r.precision = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
  return r;
}

std::vector<int> quantile_bins(std::span<const double> scores, int bins) {
  if (bins < 1) throw InvalidArgument("quantile_bins: need at least one bin");
  const std::size_t n = scores.size();
  std::vector<int> out(n, 0);
  auto idx = order_by_score(scores);
  int current = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (r == 0 || scores[idx[r]] != scores[idx[r - 1]])
      current = static_cast<int>((r * static_cast<std::size_t>(bins)) / n);
    out[idx[r]] = current;
  }
  return out;
}

std::vector<CalibrationRow> calibration_by_decile(std::span<const double> aa, std::span<const Label> verdicts,
                                                  std::span<const Label> labels) {
  require_same_length(aa.size(), verdicts.size(), "calibration_by_decile");
  require_same_length(aa.size(), labels.size(), "calibration_by_decile");
  auto bin = quantile_bins(aa, 10);
  std::vector<CalibrationRow> rows(10);
  std::vector<std::size_t> tp(10), fp(10);
  for (int d = 0; d < 10; ++d) rows[static_cast<std::size_t>(d)].decile = d + 1;
  for (std::size_t i = 0; i < aa.size(); ++i) {
    auto& row = rows[static_cast<std::size_t>(bin[i])];
    ++row.pairs;
    if (labels[i]) {
      ++row.positives;
      if (verdicts[i]) ++tp[static_cast<std::size_t>(bin[i])];
    } else {
      ++row.negatives;
      if (verdicts[i]) ++fp[static_cast<std::size_t>(bin[i])];
    }
  }
  for (std::size_t d = 0; d < 10; ++d) {
    if (rows[d].positives) rows[d].tpr = static_cast<double>(tp[d]) / static_cast<double>(rows[d].positives);
    if (rows[d].negatives) rows[d].fpr = static_cast<double>(fp[d]) / static_cast<double>(rows[d].negatives);
  }
  return rows;
}

namespace {

std::vector<double> average_ranks(std::span<const double> x) {
  auto idx = order_by_score(x);
  std::vector<double> rank(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j < idx.size() && x[idx[j]] == x[idx[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j - 1)) / 2.0 + 1.0;
    for (std::size_t k = i; k < j; ++k) rank[idx[k]] = r;
    i = j;
  }
  return rank;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  require_same_length(x.size(), y.size(), "spearman");
  if (x.size() < 2) throw InvalidArgument("spearman: need at least two observations");
  auto rx = average_ranks(x);
  auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) throw InvalidArgument("spearman: constant input");
  return sxy / std::sqrt(sxx * syy);
}

const char* to_string(Quadrant q) noexcept {
  switch (q) {
    case Quadrant::BothCatch: return "both_catch";
    case Quadrant::LlmOnly: return "llm_only";
    case Quadrant::AaOnly: return "aa_only";
    case Quadrant::BothMiss: return "both_miss";
  }
  return "?";
}

QuadrantResult agreement_quadrants_at(std::span<const double> aa, std::span<const double> llm_probs,
                                      std::span<const Label> labels, double aa_threshold, double llm_threshold) {
  require_same_length(aa.size(), llm_probs.size(), "agreement_quadrants");
  require_same_length(aa.size(), labels.size(), "agreement_quadrants");
  QuadrantResult r;
  r.counts.aa_threshold = aa_threshold;
  r.counts.llm_threshold = llm_threshold;
  r.category.resize(aa.size());
  for (std::size_t i = 0; i < aa.size(); ++i) {
    if (!labels[i]) continue;
    const bool a = aa[i] >= aa_threshold;
    const bool l = llm_probs[i] >= llm_threshold;
    Quadrant q = a ? (l ? Quadrant::BothCatch : Quadrant::AaOnly) : (l ? Quadrant::LlmOnly : Quadrant::BothMiss);
    r.category[i] = q;
    switch (q) {
      case Quadrant::BothCatch: ++r.counts.both_catch; break;
      case Quadrant::LlmOnly: ++r.counts.llm_only; break;
      case Quadrant::AaOnly: ++r.counts.aa_only; break;
      case Quadrant::BothMiss: ++r.counts.both_miss; break;
    }
  }
  return r;
}

QuadrantResult agreement_quadrants(std::span<const double> aa, std::span<const double> llm_probs,
                                   std::span<const Label> labels, double llm_threshold) {
  require_same_length(aa.size(), labels.size(), "agreement_quadrants");
  std::vector<double> pos;
  for (std::size_t i = 0; i < aa.size(); ++i)
    if (labels[i]) pos.push_back(aa[i]);
  if (pos.empty()) throw InvalidArgument("agreement_quadrants: no positives");
  std::sort(pos.begin(), pos.end());
  const std::size_t m = pos.size() / 2;
  const double median = pos.size() % 2 ? pos[m] : (pos[m - 1] + pos[m]) / 2.0;
  return agreement_quadrants_at(aa, llm_probs, labels, median, llm_threshold);
}

const char* to_string(SampleMode m) noexcept {
  return m == SampleMode::NaturalStratified ? "natural" : "balanced";
}

std::optional<SampleMode> parse_sample_mode(std::string_view name) noexcept {
  if (name == "natural") return SampleMode::NaturalStratified;
  if (name == "balanced") return SampleMode::Balanced;
  return std::nullopt;
}

namespace {

// Draws `want` items from `subset` with equal quotas over `k` AA quantile
// strata of the subset; short strata are topped up uniformly from the rest.
void draw_stratified(std::span<const double> aa, const std::vector<std::size_t>& subset, int k, std::size_t want,
                     const std::string& group, Rng& rng, SampleResult& out) {
  if (want >= subset.size()) {
    if (want > subset.size())
      out.warnings.push_back(fmt::format("{}: requested {} but only {} available; taking all", group, want,
                                         subset.size()));
    want = subset.size();
  }
  std::vector<double> sub_scores(subset.size());
  for (std::size_t i = 0; i < subset.size(); ++i) sub_scores[i] = aa[subset[i]];
  auto bin = quantile_bins(sub_scores, k);
  std::vector<std::vector<std::size_t>> strata(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < subset.size(); ++i) strata[static_cast<std::size_t>(bin[i])].push_back(i);

  std::vector<char> taken(subset.size(), 0);
  std::size_t drawn_total = 0;
  const std::size_t base = want / static_cast<std::size_t>(k);
  const std::size_t extra = want % static_cast<std::size_t>(k);
  for (std::size_t s = 0; s < strata.size(); ++s) {
    auto& members = strata[s];
    const std::size_t quota = base + (s < extra ? 1 : 0);
    rng.shuffle(std::span<std::size_t>(members));
    const std::size_t n = std::min(quota, members.size());
    for (std::size_t i = 0; i < n; ++i) taken[members[i]] = 1;
    drawn_total += n;
    out.strata.push_back({group, static_cast<int>(s + 1), members.size(), quota, n});
  }
  if (drawn_total < want) {
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < subset.size(); ++i)
      if (!taken[i]) rest.push_back(i);
    rng.shuffle(std::span<std::size_t>(rest));
    const std::size_t fill = want - drawn_total;
    for (std::size_t i = 0; i < fill; ++i) taken[rest[i]] = 1;
    out.shortfall_filled += fill;
  }
  for (std::size_t i = 0; i < subset.size(); ++i)
    if (taken[i]) out.indices.push_back(subset[i]);
}

}  // namespace

SampleResult stratified_sample(std::span<const double> aa, std::span<const Label> labels, const SamplePlan& plan) {
  require_same_length(aa.size(), labels.size(), "stratified_sample");
  SampleResult out;
  Rng rng(plan.seed);
  if (plan.mode == SampleMode::NaturalStratified) {
    std::vector<std::size_t> all(aa.size());
    std::iota(all.begin(), all.end(), 0);
    draw_stratified(aa, all, plan.strata(), plan.total, "all", rng, out);
  } else {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] ? pos : neg).push_back(i);
    const std::size_t want_neg = plan.total / 2;
    draw_stratified(aa, pos, plan.strata(), plan.total - want_neg, "positive", rng, out);
    draw_stratified(aa, neg, plan.strata(), want_neg, "negative", rng, out);
  }
  std::sort(out.indices.begin(), out.indices.end());
  return out;
}

// ---------------------------------------------------------------------------
// Report serialisation

namespace {

using nlohmann::json;

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_double(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

json rates_json(const ConfusionRates& r) {
  return {{"tp", r.tp},       {"fp", r.fp},   {"tn", r.tn},   {"fn", r.fn}, {"recall", r.recall},
          {"precision", opt(r.precision)}, {"tpr", r.tpr}, {"fpr", r.fpr}};
}

ConfusionRates rates_from(const json& j) {
  ConfusionRates r;
  r.tp = j.at("tp").get<std::size_t>();
  r.fp = j.at("fp").get<std::size_t>();
  r.tn = j.at("tn").get<std::size_t>();
  r.fn = j.at("fn").get<std::size_t>();
  r.recall = j.at("recall").get<double>();
  r.precision = opt_double(j, "precision");
  r.tpr = j.at("tpr").get<double>();
  r.fpr = j.at("fpr").get<double>();
  return r;
}

}  // namespace

void to_json(json& j, const EvalReport& r) {
  j = json::object();
  j["era"] = r.era;
  j["provenance"] = r.provenance;
  j["sample"] = {{"mode", r.sample.mode},
                 {"seed", r.sample.seed},
                 {"requested", r.sample.requested},
                 {"drawn", r.sample.drawn},
                 {"positives", r.sample.positives},
                 {"negatives", r.sample.negatives},
                 {"pool", r.sample.pool},
                 {"pool_positives", r.sample.pool_positives},
                 {"shortfall_filled", r.sample.shortfall_filled},
                 {"warnings", r.sample.warnings}};
  json methods = json::array();
  for (const auto& m : r.methods) {
    json mj = {{"method", m.method}, {"auroc", opt(m.auroc)}, {"note", m.note}, {"threshold", opt(m.threshold)}};
    mj["at_threshold"] = m.at_threshold ? rates_json(*m.at_threshold) : json(nullptr);
    methods.push_back(std::move(mj));
  }
  j["methods"] = std::move(methods);
  json cal = json::array();
  for (const auto& c : r.calibration)
    cal.push_back({{"decile", c.decile},
                   {"pairs", c.pairs},
                   {"positives", c.positives},
                   {"negatives", c.negatives},
                   {"tpr", opt(c.tpr)},
                   {"fpr", opt(c.fpr)}});
  j["calibration"] = std::move(cal);
  j["spearman"] = r.spearman;
  if (r.quadrants) {
    const auto& q = *r.quadrants;
    j["quadrants"] = {{"both_catch", q.both_catch}, {"llm_only", q.llm_only},         {"aa_only", q.aa_only},
                      {"both_miss", q.both_miss},   {"aa_threshold", q.aa_threshold}, {"llm_threshold", q.llm_threshold},
                      {"positives", r.quadrant_positives}};
  } else {
    j["quadrants"] = nullptr;
  }
  json hom = json::array();
  for (const auto& h : r.homophily)
    hom.push_back({{"feature", h.feature},
                   {"positives", h.positives},
                   {"negatives", h.negatives},
                   {"collab_rate", opt(h.collab_rate)},
                   {"noncollab_rate", opt(h.noncollab_rate)},
                   {"ratio", opt(h.ratio)}});
  j["homophily"] = std::move(hom);
  json tables = json::object();
  for (const auto& [name, t] : r.tables) tables[name] = {{"header", t.header}, {"rows", t.rows}};
  j["tables"] = std::move(tables);
}

void from_json(const json& j, EvalReport& r) {
  r = EvalReport{};
  r.era = j.at("era").get<std::string>();
  r.provenance = j.at("provenance");
  const auto& s = j.at("sample");
  r.sample.mode = s.at("mode").get<std::string>();
  r.sample.seed = s.at("seed").get<std::uint64_t>();
  r.sample.requested = s.at("requested").get<std::size_t>();
  r.sample.drawn = s.at("drawn").get<std::size_t>();
  r.sample.positives = s.at("positives").get<std::size_t>();
  r.sample.negatives = s.at("negatives").get<std::size_t>();
  r.sample.pool = s.at("pool").get<std::size_t>();
  r.sample.pool_positives = s.at("pool_positives").get<std::size_t>();
  r.sample.shortfall_filled = s.at("shortfall_filled").get<std::size_t>();
  r.sample.warnings = s.at("warnings").get<std::vector<std::string>>();
  for (const auto& mj : j.at("methods")) {
    MethodMetrics m;
    m.method = mj.at("method").get<std::string>();
    m.auroc = opt_double(mj, "auroc");
    m.note = mj.value("note", "");
    m.threshold = opt_double(mj, "threshold");
    if (mj.contains("at_threshold") && !mj.at("at_threshold").is_null()) m.at_threshold = rates_from(mj.at("at_threshold"));
    r.methods.push_back(std::move(m));
  }
  for (const auto& cj : j.at("calibration")) {
    CalibrationRow c;
    c.decile = cj.at("decile").get<int>();
    c.pairs = cj.at("pairs").get<std::size_t>();
    c.positives = cj.at("positives").get<std::size_t>();
    c.negatives = cj.at("negatives").get<std::size_t>();
    c.tpr = opt_double(cj, "tpr");
    c.fpr = opt_double(cj, "fpr");
    r.calibration.push_back(c);
  }
  r.spearman = j.at("spearman").get<std::map<std::string, double>>();
  if (!j.at("quadrants").is_null()) {
    const auto& q = j.at("quadrants");
    QuadrantCounts c;
    c.both_catch = q.at("both_catch").get<std::size_t>();
    c.llm_only = q.at("llm_only").get<std::size_t>();
    c.aa_only = q.at("aa_only").get<std::size_t>();
    c.both_miss = q.at("both_miss").get<std::size_t>();
    c.aa_threshold = q.at("aa_threshold").get<double>();
    c.llm_threshold = q.at("llm_threshold").get<double>();
    r.quadrants = c;
    r.quadrant_positives = q.at("positives").get<std::size_t>();
  }
  for (const auto& hj : j.at("homophily")) {
    HomophilyRow h;
    h.feature = hj.at("feature").get<std::string>();
    h.positives = hj.at("positives").get<std::size_t>();
    h.negatives = hj.at("negatives").get<std::size_t>();
    h.collab_rate = opt_double(hj, "collab_rate");
    h.noncollab_rate = opt_double(hj, "noncollab_rate");
    h.ratio = opt_double(hj, "ratio");
    r.homophily.push_back(std::move(h));
  }
  for (const auto& [name, tj] : j.at("tables").items()) {
    Table t;
    t.header = tj.at("header").get<std::vector<std::string>>();
    t.rows = tj.at("rows").get<std::vector<std::vector<std::string>>>();
    r.tables.emplace(name, std::move(t));
  }
}

namespace {

void expect(std::vector<std::string>& problems, bool ok, const std::string& msg) {
  if (!ok) problems.push_back(msg);
}

bool is_count(const json& j, const char* key) { return j.contains(key) && j.at(key).is_number_unsigned(); }

bool is_rate_or_null(const json& j, const char* key) {
  if (!j.contains(key)) return false;
  const auto& v = j.at(key);
  return v.is_null() || (v.is_number() && v.get<double>() >= 0.0 && v.get<double>() <= 1.0);
}

}  // namespace

std::vector<std::string> validate_report(const json& j) {
  std::vector<std::string> p;
  if (!j.is_object()) return {"report is not a JSON object"};
  for (const char* key : {"era", "provenance", "sample", "methods", "calibration", "spearman", "quadrants",
                          "homophily", "tables"})
    expect(p, j.contains(key), fmt::format("missing key '{}'", key));
  if (!p.empty()) return p;

  expect(p, j["era"].is_string(), "era must be a string");
  expect(p, j["provenance"].is_object(), "provenance must be an object");
  if (j["provenance"].is_object()) {
    for (const char* key : {"seed", "config_hash", "tool_version"})
      expect(p, j["provenance"].contains(key), fmt::format("provenance.{} missing", key));
  }

  const auto& s = j["sample"];
  if (!s.is_object()) {
    p.push_back("sample must be an object");
  } else {
    for (const char* key : {"seed", "requested", "drawn", "positives", "negatives", "pool", "pool_positives",
                            "shortfall_filled"})
      expect(p, is_count(s, key), fmt::format("sample.{} must be a non-negative integer", key));
    expect(p, s.contains("mode") && s["mode"].is_string(), "sample.mode must be a string");
    expect(p, s.contains("warnings") && s["warnings"].is_array(), "sample.warnings must be an array");
    if (p.empty())
      expect(p, s["positives"].get<std::size_t>() + s["negatives"].get<std::size_t>() == s["drawn"].get<std::size_t>(),
             "sample.positives + sample.negatives must equal sample.drawn");
  }

  if (!j["methods"].is_array() || j["methods"].empty()) {
    p.push_back("methods must be a non-empty array");
  } else {
    for (const auto& m : j["methods"]) {
      const std::string name = m.contains("method") && m["method"].is_string() ? m["method"].get<std::string>() : "?";
      expect(p, name != "?", "method entry without a name");
      expect(p, is_rate_or_null(m, "auroc"), fmt::format("method {}: auroc must be in [0,1] or null", name));
      if (m.contains("auroc") && m["auroc"].is_null())
        expect(p, m.contains("note") && m["note"].is_string() && !m["note"].get<std::string>().empty(),
               fmt::format("method {}: null auroc needs a note", name));
    }
  }

  if (!j["calibration"].is_array()) {
    p.push_back("calibration must be an array");
  } else {
    for (const auto& c : j["calibration"]) {
      expect(p, c.is_object() && is_count(c, "pairs") && is_count(c, "positives") && is_count(c, "negatives"),
             "calibration rows need pairs/positives/negatives counts");
      expect(p, c.is_object() && is_rate_or_null(c, "tpr") && is_rate_or_null(c, "fpr"),
             "calibration tpr/fpr must be rates or null");
    }
  }

  if (!j["spearman"].is_object()) p.push_back("spearman must be an object");
  for (const auto& [k, v] : j["spearman"].items())
    expect(p, v.is_number() && v.get<double>() >= -1.0 && v.get<double>() <= 1.0,
           fmt::format("spearman {} must be in [-1,1]", k));

  const auto& q = j["quadrants"];
  if (!q.is_null()) {
    bool counts = q.is_object();
    for (const char* key : {"both_catch", "llm_only", "aa_only", "both_miss", "positives"})
      counts = counts && is_count(q, key);
    expect(p, counts, "quadrants need integer counts");
    if (counts) {
      auto sum = q["both_catch"].get<std::size_t>() + q["llm_only"].get<std::size_t>() +
                 q["aa_only"].get<std::size_t>() + q["both_miss"].get<std::size_t>();
      expect(p, sum == q["positives"].get<std::size_t>(), "quadrant counts must sum to positives");
    }
  }

  if (!j["homophily"].is_array()) {
    p.push_back("homophily must be an array");
  } else {
    for (const auto& h : j["homophily"]) {
      expect(p, h.is_object() && h.contains("feature") && h["feature"].is_string(), "homophily rows need a feature");
      expect(p, h.is_object() && is_rate_or_null(h, "collab_rate") && is_rate_or_null(h, "noncollab_rate"),
             "homophily rates must be in [0,1] or null");
    }
  }

  if (!j["tables"].is_object()) {
    p.push_back("tables must be an object");
  } else {
    for (const auto& [name, t] : j["tables"].items()) {
      bool ok = t.is_object() && t.contains("header") && t["header"].is_array() && t.contains("rows") &&
                t["rows"].is_array();
      expect(p, ok, fmt::format("table {} needs header and rows", name));
      if (!ok) continue;
      for (const auto& row : t["rows"])
        expect(p, row.is_array() && row.size() == t["header"].size(),
               fmt::format("table {}: row width differs from header", name));
    }
  }
  return p;
}

void write_table_csv(std::ostream& out, const Table& t, const std::string& provenance_line) {
  if (!provenance_line.empty()) out << "# " << provenance_line << '\n';
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << csv_field(t.header[i]);
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << '\n';
  }
}

namespace {

std::string na(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

}  // namespace

std::vector<std::filesystem::path> emit_report(const EvalReport& r, const std::filesystem::path& dir,
                                               const std::string& provenance_line) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const std::string& content) {
    auto path = dir / name;
    write_file_atomic(path, content);
    written.push_back(path);
  };
  auto emit_table = [&](const std::string& name, const Table& t) {
    std::ostringstream os;
    write_table_csv(os, t, provenance_line);
    emit(name, os.str());
  };

  emit("report.json", json(r).dump(2) + "\n");

  Table methods{{"method", "auroc", "threshold", "recall", "precision", "tpr", "fpr", "note"}, {}};
  for (const auto& m : r.methods) {
    const auto* c = m.at_threshold ? &*m.at_threshold : nullptr;
    methods.rows.push_back({m.method, na(m.auroc), na(m.threshold), c ? format_number(c->recall) : "NA",
                            c ? na(c->precision) : "NA", c ? format_number(c->tpr) : "NA",
                            c ? format_number(c->fpr) : "NA", m.note});
  }
  emit_table("methods.csv", methods);

  Table cal{{"decile", "pairs", "positives", "negatives", "tpr", "fpr"}, {}};
  for (const auto& c : r.calibration)
    cal.rows.push_back({std::to_string(c.decile), std::to_string(c.pairs), std::to_string(c.positives),
                        std::to_string(c.negatives), na(c.tpr), na(c.fpr)});
  emit_table("fig_calibration.csv", cal);

  Table hom{{"feature", "positives", "negatives", "collab_rate", "noncollab_rate", "ratio"}, {}};
  for (const auto& h : r.homophily)
    hom.rows.push_back({h.feature, std::to_string(h.positives), std::to_string(h.negatives), na(h.collab_rate),
                        na(h.noncollab_rate), na(h.ratio)});
  emit_table("homophily.csv", hom);

  Table quad{{"quadrant", "count", "share"}, {}};
  if (r.quadrants) {
    const auto& q = *r.quadrants;
    const double total = static_cast<double>(std::max<std::size_t>(q.total(), 1));
    for (auto [name, n] : {std::pair{"both_catch", q.both_catch}, std::pair{"llm_only", q.llm_only},
                           std::pair{"aa_only", q.aa_only}, std::pair{"both_miss", q.both_miss}})
      quad.rows.push_back({name, std::to_string(n), format_number(static_cast<double>(n) / total)});
  }
  emit_table("quadrants.csv", quad);

  for (const auto& [name, t] : r.tables) emit_table(name + ".csv", t);
  return written;
}

}  // namespace coauthlp
