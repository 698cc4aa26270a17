#pragma once

// Profile-derived pair features: concept overlap, count products and the
// same-group indicators used for homophily analysis.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coauthlp/evaluation.hpp"
#include "coauthlp/profiles.hpp"

namespace coauthlp {

/// Intersection size after lowercasing and trimming each concept.
std::size_t concept_overlap(const AuthorProfile& a, const AuthorProfile& b);
/// |A n B| / |A u B| over normalised concepts; 0 when both lists are empty.
double concept_jaccard(const AuthorProfile& a, const AuthorProfile& b);

enum class CountField : std::uint8_t { CitedBy, Works };
double count_product(const AuthorProfile& a, const AuthorProfile& b, CountField field);

/// Every field is absent when either profile is missing; same_* fields are
/// also absent when either side lacks the underlying value.
struct PairFeatureVector {
  std::optional<double> concept_overlap_count;
  std::optional<double> concept_jaccard;
  std::optional<double> cited_by_product;
  std::optional<double> works_product;
  std::optional<int> same_institution;
  std::optional<int> same_country;
  std::optional<int> same_continent;
  std::optional<int> same_ethnicity;

  bool operator==(const PairFeatureVector&) const = default;
};

/// Continent falls back to the one implied by country_code.
PairFeatureVector sociocultural_features(const AuthorProfile& a, const AuthorProfile& b);
/// All features; a null profile yields an all-missing vector.
PairFeatureVector pair_features(const AuthorProfile* a, const AuthorProfile* b);

/// Column names in PairFeatureVector order.
const std::vector<std::string>& feature_names();
std::optional<double> feature_value(const PairFeatureVector& f, std::string_view name);

/// Same-group rate among positives over the rate among negatives. Pairs with
/// the feature missing are excluded from both. Throws InvalidArgument when a
/// class has no usable pair; the ratio is absent when the negative rate is 0.
HomophilyRow homophily_ratio(std::span<const std::optional<int>> same, std::span<const Label> labels,
                             std::string feature = {});

/// Builds a labelled set whose same-group rates are exactly `collab_rate` and
/// `noncollab_rate` to within 1/n (rounded counts).
struct HomophilyFixture {
  std::vector<std::optional<int>> same;
  std::vector<Label> labels;
};
HomophilyFixture homophily_fixture(double collab_rate, double noncollab_rate, std::size_t per_class);

struct FeatureAuroc {
  std::string feature;
  std::size_t pairs = 0;  // with the feature present
  std::optional<double> auroc;
  std::string note;  // reason when auroc is absent
};

/// AUROC of each named feature over the pairs where it is present.
std::vector<FeatureAuroc> feature_auroc_table(std::span<const PairFeatureVector> pairs, std::span<const Label> labels,
                                              std::span<const std::string> features);

}  // namespace coauthlp
