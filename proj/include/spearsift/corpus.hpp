#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spearsift/parallel.hpp"
#include "spearsift/person_name.hpp"
#include "spearsift/profiles.hpp"
#include "spearsift/timeutil.hpp"

namespace spearsift::corpus {

enum class Label { Spear, Spam, Benign };

std::string_view to_string(Label label);
/// Case-insensitive "spear" | "spam" | "benign".
std::optional<Label> parse_label(std::string_view text);

struct EmailRecord {
  std::string message_id;
  std::string from_addr;
  std::string to_addr;
  std::string subject;
  std::optional<std::string> body;
  std::optional<std::string> attachment_name;
  // May be absent even when a name is present; absent is "unavailable", not 0.
  std::optional<std::int64_t> attachment_size;
  Timestamp timestamp;
  Label label = Label::Benign;

  bool operator==(const EmailRecord&) const = default;
};

/// One JSON object per line with keys message_id, from, to, subject, body,
/// attachment_name, attachment_size, timestamp (ISO-8601), label.
/// `label` is used when the line carries none; a conflicting line label is an
/// error. Throws MalformedRecord, MissingField or BadTimestamp.
EmailRecord parse_email_record(std::string_view raw_line, std::optional<Label> label = std::nullopt);
std::string format_email_record(const EmailRecord& record);

std::vector<EmailRecord> read_corpus(const std::string& path, std::optional<Label> label = std::nullopt,
                                     Execution exec = Execution::Parallel);
void write_corpus(const std::string& path, const std::vector<EmailRecord>& records);

/// firstName.lastName@domain or firstName_lastName@domain; the local part is
/// split on its first '.' or '_'. Throws NotAnAddress or NoNamePattern.
PersonName extract_name(std::string_view address);
std::string format_address(const PersonName& name, std::string_view domain, char separator = '.');

/// Organisation label of the address domain ("acme" for "j.d@mail.acme.com").
std::string company_from_address(std::string_view address);

/// Keeps the first record of each (from, to, subject, body, timestamp) key in
/// input order. Absent bodies compare as empty strings.
std::vector<EmailRecord> dedup(const std::vector<EmailRecord>& records);

struct LinkedRow {
  EmailRecord email;
  std::optional<profiles::ProfileRecord> profile;
};

struct LinkedDataset {
  std::vector<LinkedRow> rows;
  std::string company;  // empty when companies were taken from each address
  std::size_t dropped = 0;
  std::size_t ambiguous = 0;
};

struct LinkOptions {
  // Company every recipient is matched against; when unset, the company is
  // derived from each recipient's address domain.
  std::optional<std::string> company;
  // Strict: unmatched emails are dropped and ambiguous keys are an error.
  // Lenient: unmatched emails are kept without a profile and ambiguous keys
  // resolve to the first profile in input order.
  bool strict = true;
};

/// Throws NoProfilesLoaded, or AmbiguousMatch in strict mode.
LinkedDataset link_profiles(const std::vector<EmailRecord>& emails,
                            const std::vector<profiles::ProfileRecord>& profiles,
                            const LinkOptions& options = {});

}  // namespace spearsift::corpus
