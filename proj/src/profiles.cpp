#include "coauthlp/profiles.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "coauthlp/error.hpp"
#include "coauthlp/text.hpp"

namespace coauthlp {

using nlohmann::json;

void to_json(json& j, const AuthorProfile& p) {
  j = json{{"id", p.id},
           {"display_name", p.display_name},
           {"institution", p.institution},
           {"country_code", p.country_code},
           {"continent", p.continent},
           {"works_count", p.works_count},
           {"cited_by_count", p.cited_by_count},
           {"concepts", p.concepts}};
  if (p.ethnicity) j["ethnicity"] = *p.ethnicity;
  else j["ethnicity"] = nullptr;
}

namespace {

std::string string_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_string()) throw ParseError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::uint64_t count_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return 0;
  if (it->is_number_unsigned()) return it->get<std::uint64_t>();
  if (it->is_number_integer()) {
    auto v = it->get<std::int64_t>();
    if (v < 0) throw ParseError(std::string("field '") + key + "' must be non-negative");
    return static_cast<std::uint64_t>(v);
  }
  throw ParseError(std::string("field '") + key + "' must be an integer");
}

}  // namespace

void from_json(const json& j, AuthorProfile& p) {
  if (!j.is_object()) throw ParseError("profile record must be a JSON object");
  auto id = j.find("id");
  if (id == j.end() || !id->is_string() || id->get<std::string>().empty())
    throw ParseError("profile record has no id");
  p.id = id->get<std::string>();
  p.display_name = string_field(j, "display_name");
  p.institution = string_field(j, "institution");
  p.country_code = string_field(j, "country_code");
  p.continent = string_field(j, "continent");
  if (p.continent.empty() && !p.country_code.empty()) p.continent = continent_for_country(p.country_code);
  p.works_count = count_field(j, "works_count");
  p.cited_by_count = count_field(j, "cited_by_count");
  p.concepts.clear();
  if (auto c = j.find("concepts"); c != j.end() && !c->is_null()) {
    if (!c->is_array()) throw ParseError("field 'concepts' must be an array");
    for (const auto& item : *c) {
      if (!item.is_string()) throw ParseError("concepts must be strings");
      p.concepts.push_back(item.get<std::string>());
    }
  }
  p.concepts = dedupe_concepts(std::move(p.concepts));
  p.ethnicity.reset();
  if (auto e = j.find("ethnicity"); e != j.end() && !e->is_null()) {
    if (!e->is_string()) throw ParseError("field 'ethnicity' must be a string");
    if (!e->get<std::string>().empty()) p.ethnicity = e->get<std::string>();
  }
}

std::vector<std::string> dedupe_concepts(std::vector<std::string> concepts) {
  std::unordered_set<std::string> seen;
  std::vector<std::string> out;
  for (auto& c : concepts) {
    if (seen.insert(c).second) out.push_back(std::move(c));
  }
  return out;
}

bool ProfileStore::upsert(AuthorProfile p) {
  auto key = p.id;
  auto [it, fresh] = by_id_.insert_or_assign(std::move(key), std::move(p));
  return !fresh;
}

const AuthorProfile* ProfileStore::find(const std::string& id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &it->second;
}

std::vector<const AuthorProfile*> ProfileStore::sorted() const {
  std::vector<const AuthorProfile*> out;
  out.reserve(by_id_.size());
  for (const auto& [_, p] : by_id_) out.push_back(&p);
  std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->id < b->id; });
  return out;
}

ProfileIngestResult ingest_profiles(std::istream& in) {
  ProfileIngestResult result;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto view = trim(line);
    if (view.empty() || view.front() == '#') continue;  // provenance / comment lines
    AuthorProfile p;
    try {
      from_json(json::parse(line), p);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    } catch (const json::exception& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), lineno);
    }
    std::string id = p.id;
    if (result.profiles.upsert(std::move(p)))
      result.warnings.push_back("duplicate profile id " + id + " at line " + std::to_string(lineno) +
                                "; keeping the later record");
  }
  return result;
}

ProfileIngestResult ingest_profiles(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open profile file " + path.string());
  return ingest_profiles(in);
}

void write_profiles_jsonl(const ProfileStore& store, std::ostream& out) {
  for (const auto* p : store.sorted()) out << json(*p).dump() << '\n';
}

std::string continent_for_country(std::string_view country_code) {
  struct Region {
    const char* name;
    const char* codes;
  };
  static constexpr Region kRegions[] = {
      {"Africa",
       "DZ AO BJ BW BF BI CV CM CF TD KM CG CD CI DJ EG GQ ER SZ ET GA GM GH GN GW KE LS LR LY MG MW ML MR MU "
       "YT MA MZ NA NE NG RE RW SH ST SN SC SL SO ZA SS SD TZ TG TN UG EH ZM ZW"},
      {"Antarctica", "AQ BV GS HM TF"},
      {"Asia",
       "AF AM AZ BH BD BT BN KH CN CY GE HK IN ID IR IQ IL JP JO KZ KW KG LA LB MO MY MV MN MM NP KP OM PK PS "
       "PH QA SA SG KR LK SY TW TJ TH TL TR TM AE UZ VN YE IO CC CX"},
      {"Europe",
       "AX AL AD AT BY BE BA BG HR CZ DK EE FO FI FR DE GI GR GG HU IS IE IM IT JE XK LV LI LT LU MT MD MC ME "
       "NL MK NO PL PT RO RU SM RS SK SI ES SJ SE CH UA GB VA"},
      {"North America",
       "AI AG AW BS BB BZ BM BQ VG CA KY CR CU CW DM DO SV GL GD GP GT HT HN JM MQ MX MS NI PA PR BL KN LC MF "
       "PM VC SX TT TC US VI UM"},
      {"Oceania", "AS AU CK FJ PF GU KI MH FM NR NC NZ NU NF MP PW PG PN WS SB TK TO TV VU WF"},
      {"South America", "AR BO BR CL CO EC FK GF GY PY PE SR UY VE"},
  };
  std::string code(trim(country_code));
  for (auto& c : code) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (code.size() != 2) return {};
  for (const auto& r : kRegions) {
    std::string_view codes(r.codes);
    for (std::size_t i = 0; i + 1 < codes.size(); i += 3)
      if (codes.substr(i, 2) == code) return r.name;
  }
  return {};
}

}  // namespace coauthlp
