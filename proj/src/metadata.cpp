#include "coauthlp/metadata.hpp"

#include <algorithm>
#include <cmath>

#include "coauthlp/error.hpp"
#include "coauthlp/text.hpp"

namespace coauthlp {

namespace {

std::vector<std::string> concept_set(const AuthorProfile& p) {
  std::vector<std::string> out;
  out.reserve(p.concepts.size());
  for (const auto& c : p.concepts) {
    auto n = to_lower(trim(c));
    if (!n.empty()) out.push_back(std::move(n));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t intersection_size(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::size_t n = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++n, ++ia, ++ib;
    }
  }
  return n;
}

std::optional<int> same_value(std::string_view a, std::string_view b) {
  if (a.empty() || b.empty()) return std::nullopt;
  return a == b ? 1 : 0;
}

std::string continent_of(const AuthorProfile& p) {
  return p.continent.empty() ? continent_for_country(p.country_code) : p.continent;
}

}  // namespace

std::size_t concept_overlap(const AuthorProfile& a, const AuthorProfile& b) {
  return intersection_size(concept_set(a), concept_set(b));
}

double concept_jaccard(const AuthorProfile& a, const AuthorProfile& b) {
  auto sa = concept_set(a);
  auto sb = concept_set(b);
  const std::size_t inter = intersection_size(sa, sb);
  const std::size_t uni = sa.size() + sb.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double count_product(const AuthorProfile& a, const AuthorProfile& b, CountField field) {
  if (field == CountField::CitedBy)
    return static_cast<double>(a.cited_by_count) * static_cast<double>(b.cited_by_count);
  return static_cast<double>(a.works_count) * static_cast<double>(b.works_count);
}

PairFeatureVector sociocultural_features(const AuthorProfile& a, const AuthorProfile& b) {
  PairFeatureVector f;
  f.same_institution = same_value(normalize_label(a.institution), normalize_label(b.institution));
  f.same_country = same_value(a.country_code, b.country_code);
  f.same_continent = same_value(continent_of(a), continent_of(b));
  f.same_ethnicity = same_value(a.ethnicity.value_or(""), b.ethnicity.value_or(""));
  return f;
}

PairFeatureVector pair_features(const AuthorProfile* a, const AuthorProfile* b) {
  if (!a || !b) return {};
  PairFeatureVector f = sociocultural_features(*a, *b);
  f.concept_overlap_count = static_cast<double>(concept_overlap(*a, *b));
  f.concept_jaccard = concept_jaccard(*a, *b);
  f.cited_by_product = count_product(*a, *b, CountField::CitedBy);
  f.works_product = count_product(*a, *b, CountField::Works);
  return f;
}

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names{"concept_overlap", "concept_jaccard", "cited_by_product",
                                              "works_product",   "same_institution", "same_country",
                                              "same_continent",  "same_ethnicity"};
  return names;
}

std::optional<double> feature_value(const PairFeatureVector& f, std::string_view name) {
  auto as_double = [](const std::optional<int>& v) -> std::optional<double> {
    if (!v) return std::nullopt;
    return static_cast<double>(*v);
  };
  if (name == "concept_overlap") return f.concept_overlap_count;
  if (name == "concept_jaccard") return f.concept_jaccard;
  if (name == "cited_by_product") return f.cited_by_product;
  if (name == "works_product") return f.works_product;
  if (name == "same_institution") return as_double(f.same_institution);
  if (name == "same_country") return as_double(f.same_country);
  if (name == "same_continent") return as_double(f.same_continent);
  if (name == "same_ethnicity") return as_double(f.same_ethnicity);
  throw InvalidArgument("unknown feature: " + std::string(name));
}

HomophilyRow homophily_ratio(std::span<const std::optional<int>> same, std::span<const Label> labels,
                             std::string feature) {
  if (same.size() != labels.size()) throw InvalidArgument("homophily_ratio: length mismatch");
  HomophilyRow row;
  row.feature = std::move(feature);
  std::size_t pos_same = 0, neg_same = 0;
  for (std::size_t i = 0; i < same.size(); ++i) {
    if (!same[i]) continue;
    if (labels[i]) {
      ++row.positives;
      pos_same += *same[i] ? 1 : 0;
    } else {
      ++row.negatives;
      neg_same += *same[i] ? 1 : 0;
    }
  }
  if (row.positives == 0 || row.negatives == 0)
    throw InvalidArgument("homophily_ratio: need a positive and a negative pair with the feature present");
  row.collab_rate = static_cast<double>(pos_same) / static_cast<double>(row.positives);
  row.noncollab_rate = static_cast<double>(neg_same) / static_cast<double>(row.negatives);
  if (*row.noncollab_rate > 0) row.ratio = *row.collab_rate / *row.noncollab_rate;
  return row;
}

HomophilyFixture homophily_fixture(double collab_rate, double noncollab_rate, std::size_t per_class) {
  if (!(collab_rate >= 0 && collab_rate <= 1 && noncollab_rate >= 0 && noncollab_rate <= 1))
    throw InvalidArgument("homophily_fixture: rates must lie in [0,1]");
  HomophilyFixture f;
  auto add = [&](double rate, Label label) {
    const auto hits = static_cast<std::size_t>(std::llround(rate * static_cast<double>(per_class)));
    for (std::size_t i = 0; i < per_class; ++i) {
      f.same.emplace_back(i < hits ? 1 : 0);
      f.labels.push_back(label);
    }
  };
  add(collab_rate, 1);
  add(noncollab_rate, 0);
  return f;
}

std::vector<FeatureAuroc> feature_auroc_table(std::span<const PairFeatureVector> pairs, std::span<const Label> labels,
                                              std::span<const std::string> features) {
  if (pairs.size() != labels.size()) throw InvalidArgument("feature_auroc_table: length mismatch");
  std::vector<FeatureAuroc> out;
  for (const auto& name : features) {
    FeatureAuroc row;
    row.feature = name;
    std::vector<double> scores;
    std::vector<Label> present_labels;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (auto v = feature_value(pairs[i], name)) {
        scores.push_back(*v);
        present_labels.push_back(labels[i]);
      }
    }
    row.pairs = scores.size();
    try {
      row.auroc = auroc(scores, present_labels);
    } catch (const InvalidArgument& e) {
      row.note = e.what();
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace coauthlp
