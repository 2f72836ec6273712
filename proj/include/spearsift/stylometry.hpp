#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spearsift::stylometry {

/// Maximal runs of non-whitespace characters, in input order.
std::vector<std::string_view> tokenize(std::string_view text);

/// Removes leading/trailing characters that are not ASCII letters or digits.
/// Bytes >= 0x80 (UTF-8 sequences) count as letters.
std::string_view strip_punctuation(std::string_view token);

std::string to_lower(std::string_view text);

/// Number of Unicode code points in a UTF-8 string.
std::size_t char_count(std::string_view text);

/// words / chars, or 0 when chars == 0.
double richness(std::size_t words, std::size_t chars);

/// The 18 phishing-indicative function words counted in bodies.
const std::vector<std::string>& function_words();

struct SubjectFeatures {
  bool is_reply = false;
  bool has_bank = false;
  std::size_t num_words = 0;
  std::size_t num_chars = 0;
  double richness = 0.0;
  bool is_forwarded = false;
  bool has_verify = false;

  bool operator==(const SubjectFeatures&) const = default;
};

SubjectFeatures subject_features(std::string_view subject);

struct AttachmentFeatures {
  std::size_t name_length = 0;
  std::uint64_t size_bytes = 0;
  // Availability mask; a sub-feature is unavailable when its input is absent.
  bool name_available = false;
  bool size_available = false;

  bool operator==(const AttachmentFeatures&) const = default;
};

/// Throws Error{NegativeSize} when size < 0.
AttachmentFeatures attachment_features(const std::optional<std::string>& name,
                                       std::optional<std::int64_t> size);

struct BodyFeatures {
  std::size_t num_unique_words = 0;
  std::size_t num_newlines = 0;
  std::size_t num_words = 0;
  std::size_t num_chars = 0;
  double richness = 0.0;
  bool has_attach = false;
  std::size_t num_function_words = 0;
  bool verify_your_account = false;
  bool has_suspension = false;

  bool operator==(const BodyFeatures&) const = default;
};

BodyFeatures body_features(std::string_view body);

}  // namespace spearsift::stylometry
