#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace coauthlp {

/// Author metadata consumed by the metadata features and the LLM prompts.
struct AuthorProfile {
  std::string id;
  std::string display_name;
  std::string institution;
  std::string country_code;  // ISO-3166 alpha-2 or empty
  std::string continent;     // empty when unknown
  std::uint64_t works_count = 0;
  std::uint64_t cited_by_count = 0;
  std::vector<std::string> concepts;  // most salient first, no duplicates
  std::optional<std::string> ethnicity;

  bool operator==(const AuthorProfile&) const = default;
};

void to_json(nlohmann::json& j, const AuthorProfile& p);
/// Throws ParseError when `id` is missing; other fields default to empty.
void from_json(const nlohmann::json& j, AuthorProfile& p);

/// Drops repeated concepts, keeping the first occurrence.
std::vector<std::string> dedupe_concepts(std::vector<std::string> concepts);

class ProfileStore {
 public:
  /// Inserts or replaces; returns true when an existing record was replaced.
  bool upsert(AuthorProfile p);
  const AuthorProfile* find(const std::string& id) const;
  std::size_t size() const noexcept { return by_id_.size(); }
  /// Profiles in ascending id order.
  std::vector<const AuthorProfile*> sorted() const;

 private:
  std::unordered_map<std::string, AuthorProfile> by_id_;
};

struct ProfileIngestResult {
  ProfileStore profiles;
  std::vector<std::string> warnings;
};

/// Reads JSON Lines, skipping blank and '#' lines. Duplicate ids: last record
/// wins and a warning is added.
ProfileIngestResult ingest_profiles(std::istream& in);
ProfileIngestResult ingest_profiles(const std::filesystem::path& path);

void write_profiles_jsonl(const ProfileStore& store, std::ostream& out);

/// Continent name for an ISO-3166 alpha-2 code, empty when unknown.
std::string continent_for_country(std::string_view country_code);

}  // namespace coauthlp
