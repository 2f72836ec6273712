#pragma once

#include <chrono>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "spearsift/corpus.hpp"
#include "spearsift/parallel.hpp"

namespace spearsift::charstats {

enum class Field { AttachmentName, AttachmentType, Subject, BodyWord, SubjectWord };

std::string_view to_string(Field field);
std::optional<Field> parse_field(std::string_view text);

struct FrequencyEntry {
  std::string value;
  std::size_t count = 0;
  double percentage = 0.0;

  bool operator==(const FrequencyEntry&) const = default;
};

struct FrequencyTable {
  Field field = Field::Subject;
  // Records with the field present, or the number of counted tokens for the
  // word fields; percentages are relative to this.
  std::size_t population = 0;
  std::vector<FrequencyEntry> entries;  // count descending, then value ascending

  bool operator==(const FrequencyTable&) const = default;
};

/// Lowercased final extension, "(none)" when the name has none.
std::string attachment_type(std::string_view name);

/// Throws OutOfRange when n == 0.
FrequencyTable top_frequencies(const std::vector<corpus::EmailRecord>& records, Field field, std::size_t n,
                               Execution exec = Execution::Parallel);
/// Throws UnknownField for an unrecognized field name.
FrequencyTable top_frequencies(const std::vector<corpus::EmailRecord>& records, std::string_view field,
                               std::size_t n, Execution exec = Execution::Parallel);

/// Lowercased, punctuation-stripped whitespace tokens minus `stopwords`.
FrequencyTable word_frequency(const std::vector<std::string>& texts, std::size_t top_n = 100,
                              const std::set<std::string>& stopwords = {}, Execution exec = Execution::Parallel);

struct TimelineBucket {
  std::chrono::year_month month;
  std::size_t count = 0;

  bool operator==(const TimelineBucket&) const = default;
};

struct Timeline {
  std::optional<corpus::Label> label;  // unset: all records
  std::vector<TimelineBucket> buckets;  // consecutive months, zero-filled
};

Timeline timeline(const std::vector<corpus::EmailRecord>& records, std::optional<corpus::Label> label);

// Tab-separated output with a header line.
std::string format_table(const FrequencyTable& table);
std::string format_timeline(const Timeline& timeline);

}  // namespace spearsift::charstats
