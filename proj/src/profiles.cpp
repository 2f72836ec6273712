#include "spearsift/profiles.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "spearsift/error.hpp"
#include "spearsift/stylometry.hpp"

namespace spearsift::profiles {

namespace {

using nlohmann::json;
using stylometry::strip_punctuation;
using stylometry::to_lower;
using stylometry::tokenize;

std::string trim_copy(std::string_view s) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

// Headline tokens after punctuation stripping; punctuation-only tokens are kept
// as empty strings so they break keyword bigrams.
struct HeadlineTokens {
  std::vector<std::string> raw;    // stripped, original case
  std::vector<std::string> lower;  // stripped, lowercased
};

HeadlineTokens headline_tokens(std::string_view headline) {
  HeadlineTokens out;
  for (auto tok : tokenize(headline)) {
    auto stripped = strip_punctuation(tok);
    out.raw.emplace_back(stripped);
    out.lower.push_back(to_lower(stripped));
  }
  return out;
}

bool has_bigram(const HeadlineTokens& t, std::string_view a, std::string_view b) {
  for (std::size_t i = 0; i + 1 < t.lower.size(); ++i)
    if (t.lower[i] == a && t.lower[i + 1] == b) return true;
  return false;
}

bool has_lower(const HeadlineTokens& t, std::string_view w) {
  return std::find(t.lower.begin(), t.lower.end(), w) != t.lower.end();
}

bool has_exact(const HeadlineTokens& t, std::string_view w) {
  return std::find(t.raw.begin(), t.raw.end(), w) != t.raw.end();
}

const std::unordered_map<std::string, std::string>& country_aliases() {
  static const std::unordered_map<std::string, std::string> table = [] {
    std::unordered_map<std::string, std::string> m;
    const char* countries[] = {
        "Afghanistan", "Argentina", "Australia", "Austria", "Bahrain", "Belgium", "Brazil",
        "Canada", "Chile", "China", "Colombia", "Czech Republic", "Denmark", "Egypt",
        "Finland", "France", "Germany", "Greece", "Hong Kong", "Hungary", "India",
        "Indonesia", "Iraq", "Ireland", "Israel", "Italy", "Japan", "Jordan", "Kenya",
        "Kuwait", "Luxembourg", "Malaysia", "Mexico", "Netherlands", "New Zealand",
        "Nigeria", "Norway", "Oman", "Pakistan", "Peru", "Philippines", "Poland",
        "Portugal", "Qatar", "Romania", "Russia", "Saudi Arabia", "Singapore",
        "South Africa", "South Korea", "Spain", "Sweden", "Switzerland", "Taiwan",
        "Thailand", "Turkey", "Ukraine", "United Arab Emirates", "United Kingdom",
        "United States", "Vietnam"};
    for (const char* c : countries) m.emplace(to_lower(c), c);
    const std::pair<const char*, const char*> aliases[] = {
        {"us", "United States"},           {"usa", "United States"},
        {"u.s.", "United States"},         {"u.s.a.", "United States"},
        {"united states of america", "United States"},
        {"uk", "United Kingdom"},          {"u.k.", "United Kingdom"},
        {"great britain", "United Kingdom"}, {"england", "United Kingdom"},
        {"scotland", "United Kingdom"},    {"wales", "United Kingdom"},
        {"uae", "United Arab Emirates"},   {"korea", "South Korea"},
        {"the netherlands", "Netherlands"}, {"holland", "Netherlands"},
        {"russian federation", "Russia"}};
    for (auto [alias, name] : aliases) m.emplace(alias, name);
    return m;
  }();
  return table;
}

std::optional<std::string> optional_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw Error(Errc::MalformedRecord, std::string("field '") + key + "' is not a string");
  return it->get<std::string>();
}

std::string required_string(const json& j, const char* key) {
  auto v = optional_string(j, key);
  if (!v) throw Error(Errc::MissingField, key);
  return *v;
}

std::string checked_name_part(const std::string& raw, const char* what) {
  std::string part = to_lower(trim_copy(raw));
  if (part.empty() || std::any_of(part.begin(), part.end(), [](char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r';
      }))
    throw Error(Errc::MalformedRecord, std::string("bad ") + what + " name '" + raw + "'");
  return part;
}

}  // namespace

int parse_connections(std::string_view raw) {
  if (raw == "500+") return 500;
  if (raw.empty()) throw Error(Errc::BadConnections, "empty value");
  int value = 0;
  auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
  if (ec != std::errc() || ptr != raw.data() + raw.size() || raw.front() == '-' || value > 500)
    throw Error(Errc::BadConnections, "'" + std::string(raw) + "'");
  return value;
}

int job_level(const std::optional<std::string>& headline) {
  if (!headline) return 0;
  const auto t = headline_tokens(*headline);
  int level = 0;
  const std::pair<std::string_view, int> keywords[] = {
      {"support", 1}, {"intern", 2}, {"temporary", 3}, {"manager", 5}, {"director", 6}, {"executive", 7}};
  for (auto [word, code] : keywords)
    if (has_lower(t, word)) level = std::max(level, code);
  // "IC" only as an exact uppercase token; lowercase would hit unrelated words.
  if (has_exact(t, "IC")) level = std::max(level, 4);
  return level;
}

int job_type(const std::optional<std::string>& headline) {
  if (!headline) return 0;
  const auto t = headline_tokens(*headline);
  std::vector<int> found;
  if (has_lower(t, "engineering")) found.push_back(1);
  if (has_lower(t, "research")) found.push_back(2);
  if (has_lower(t, "qa")) found.push_back(3);
  if (has_bigram(t, "information", "technology") || has_exact(t, "IT")) found.push_back(4);
  if (has_lower(t, "operations")) found.push_back(5);
  if (has_bigram(t, "human", "resources") || has_exact(t, "HR")) found.push_back(6);
  if (has_lower(t, "legal")) found.push_back(7);
  if (has_lower(t, "finance")) found.push_back(8);
  if (has_lower(t, "sales") || has_lower(t, "marketing")) found.push_back(9);
  return found.empty() ? 0 : *std::min_element(found.begin(), found.end());
}

std::string extract_country(std::string_view location_raw) {
  std::string location = trim_copy(location_raw);
  if (location.empty()) return "";
  std::string segment;
  // Last non-empty comma-separated segment.
  std::size_t end = location.size();
  while (true) {
    const std::size_t comma = location.rfind(',', end == 0 ? 0 : end - 1);
    const std::size_t begin = comma == std::string::npos ? 0 : comma + 1;
    segment = trim_copy(std::string_view(location).substr(begin, end - begin));
    if (!segment.empty() || comma == std::string::npos) break;
    end = comma;
  }
  if (segment.empty()) return location;
  const auto& table = country_aliases();
  auto it = table.find(to_lower(segment));
  return it == table.end() ? segment : it->second;
}

SocialFeatures social_features(const ProfileRecord& profile) {
  SocialFeatures f;
  f.location = profile.country.empty() ? "Unknown" : profile.country;
  f.num_connections = profile.num_connections;
  if (profile.summary) {
    const std::string& s = *profile.summary;
    f.summary_length = stylometry::char_count(s);
    std::size_t whitespace = 0;
    for (char c : s)
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') ++whitespace;
    f.summary_num_chars = f.summary_length - whitespace;
    const auto tokens = tokenize(s);
    f.summary_num_words = tokens.size();
    std::unordered_set<std::string> unique;
    for (auto tok : tokens) {
      std::string w = to_lower(strip_punctuation(tok));
      if (!w.empty()) unique.insert(std::move(w));
    }
    f.summary_unique_words = unique.size();
    f.summary_richness = stylometry::richness(f.summary_num_words, f.summary_length);
  }
  f.job_level = job_level(profile.headline);
  f.job_type = job_type(profile.headline);
  return f;
}

ProfileRecord parse_profile_record(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(Errc::MalformedRecord, e.what());
  }
  if (!j.is_object()) throw Error(Errc::MalformedRecord, "record is not an object");
  ProfileRecord p;
  p.name.first = checked_name_part(required_string(j, "first"), "first");
  p.name.last = checked_name_part(required_string(j, "last"), "last");
  p.company = trim_copy(required_string(j, "company"));
  p.location_raw = optional_string(j, "location").value_or("");
  p.country = extract_country(p.location_raw);
  auto conn = j.find("num_connections");
  if (conn == j.end() || conn->is_null()) throw Error(Errc::MissingField, "num_connections");
  if (conn->is_string()) {
    p.num_connections = parse_connections(conn->get<std::string>());
  } else if (conn->is_number_integer()) {
    const auto v = conn->get<std::int64_t>();
    if (v < 0 || v > 500) throw Error(Errc::BadConnections, std::to_string(v));
    p.num_connections = static_cast<int>(v);
  } else {
    throw Error(Errc::BadConnections, "num_connections is neither string nor integer");
  }
  p.summary = optional_string(j, "summary");
  p.headline = optional_string(j, "headline");
  return p;
}

std::string format_profile_record(const ProfileRecord& p) {
  json j = json::object();
  j["first"] = p.name.first;
  j["last"] = p.name.last;
  j["company"] = p.company;
  j["location"] = p.location_raw;
  j["num_connections"] = p.num_connections >= 500 ? json("500+") : json(p.num_connections);
  if (p.summary) j["summary"] = *p.summary;
  if (p.headline) j["headline"] = *p.headline;
  return j.dump();
}

std::vector<ProfileRecord> read_profiles(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  std::vector<ProfileRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim_copy(line).empty()) continue;
    try {
      out.push_back(parse_profile_record(line));
    } catch (const Error& e) {
      throw e.with_context(path + ":" + std::to_string(lineno));
    }
  }
  return out;
}

void write_profiles(const std::string& path, const std::vector<ProfileRecord>& profiles) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::Io, "cannot write " + path);
  for (const auto& p : profiles) out << format_profile_record(p) << '\n';
}

}  // namespace spearsift::profiles
