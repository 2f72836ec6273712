#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spearsift/person_name.hpp"

namespace spearsift::profiles {

struct ProfileRecord {
  PersonName name;
  std::string company;
  std::string location_raw;
  std::string country;  // extracted from location_raw
  int num_connections = 0;  // 0..500, 500 means "500+"
  std::optional<std::string> summary;
  std::optional<std::string> headline;

  bool operator==(const ProfileRecord&) const = default;
};

struct SocialFeatures {
  std::string location;
  int num_connections = 0;
  std::size_t summary_length = 0;     // characters including whitespace
  std::size_t summary_num_chars = 0;  // characters excluding whitespace
  std::size_t summary_unique_words = 0;
  std::size_t summary_num_words = 0;
  double summary_richness = 0.0;      // words / length
  int job_level = 0;
  int job_type = 0;

  bool operator==(const SocialFeatures&) const = default;
};

/// "500+" -> 500, otherwise a decimal integer in [0, 500].
/// Throws Error{BadConnections}.
int parse_connections(std::string_view raw);

/// Seniority: max code of {Support=1, Intern=2, Temporary=3, IC=4, Manager=5,
/// Director=6, Executive=7} found in the headline, 0 if none.
int job_level(const std::optional<std::string>& headline);

/// Area of work: min code of {Engineering=1, Research=2, QA=3, Information
/// Technology=4, Operations=5, Human Resources=6, Legal=7, Finance=8,
/// Sales/Marketing=9} found in the headline, 0 if none.
int job_type(const std::optional<std::string>& headline);

/// Last comma-separated segment of a location, normalized against the bundled
/// country table. Unknown names pass through trimmed; empty input gives "".
std::string extract_country(std::string_view location_raw);

SocialFeatures social_features(const ProfileRecord& profile);

// Line-delimited profile records:
// {"first","last","company","location","num_connections","summary"?,"headline"?}
ProfileRecord parse_profile_record(std::string_view line);
std::string format_profile_record(const ProfileRecord& profile);

std::vector<ProfileRecord> read_profiles(const std::string& path);
void write_profiles(const std::string& path, const std::vector<ProfileRecord>& profiles);

}  // namespace spearsift::profiles
